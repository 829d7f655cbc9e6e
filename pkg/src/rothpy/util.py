from functools import wraps
from signal import getsignal, signal, SIGPIPE, SIG_DFL
import errno
import math
import os
import sys
import numpy as np


def mkdir_p(path):
    """Create directory tree for path."""
    if not path:
        return
    try:
        os.makedirs(path)
    except OSError as e:
        if e.errno == errno.EEXIST and os.path.isdir(path):
            pass
        else:
            raise


def is_power_of_two(n):
    """Is n a positive integer power of two?"""
    return isinstance(n, int) and n > 0 and (n & (n - 1)) == 0


def dyadic_scales(lo_exp, hi_exp):
    """
    Dyadic scales 2^-lo_exp, ..., 2^-hi_exp in strictly decreasing order.

    e.g. dyadic_scales(3, 5) -> [0.125, 0.0625, 0.03125]
    """
    if hi_exp < lo_exp:
        raise ValueError("hi_exp must be >= lo_exp")
    return [2.0**-j for j in range(lo_exp, hi_exp + 1)]


def log2_inv(delta):
    """log2(1/delta), 0 for delta >= 1."""
    if delta <= 0:
        raise ValueError("delta must be > 0")
    if delta >= 1:
        return 0.0
    return -math.log2(delta)


def fit_slope(xs, ys):
    """Least-squares slope of ys against xs. nan with fewer than 2 points."""
    if len(xs) < 2:
        return float("nan")
    slope, _intercept = np.polyfit(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), 1)
    return float(slope)


def suppress_sigpipe(f):
    """Decorator to handle SIGPIPE cleanly.

    Prevent Python from turning SIGPIPE into an exception and printing an
    uncatchable error message. Note, if the wrapped function depends on the
    default behavior of Python when handling SIGPIPE this decorator may have
    unintended effects."""
    @wraps(f)
    def wrapper(*args, **kwargs):
        orig_handler = getsignal(SIGPIPE)
        signal(SIGPIPE, SIG_DFL)
        try:
            return f(*args, **kwargs)
        finally:
            signal(SIGPIPE, orig_handler)  # restore original Python SIGPIPE handler
    return wrapper


def quiet_keyboardinterrupt(f):
    """Decorator to exit quietly on keyboard interrupt."""
    @wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except KeyboardInterrupt:
            sys.exit()
    return wrapper
