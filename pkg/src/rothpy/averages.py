"""
Bilinear averages along a curve and the density functionals built on them.

    B_r(f, g)(x) = sum_j w_j f(x - t_j) g(x - P(t_j))

over grid nodes t_j = j*h inside the kernel support scaled by r. The sharp
kernel puts equal weight 1/m on the m nodes in (0, r], the smooth kernel
weighs nodes by a C-infinity bump. P(t_j) is rounded to the nearest grid
point, so every average is a finite bilinear form on the samples.
"""
from functools import lru_cache
import numpy as np
import pandas as pd
from . import errors
from . import grid
from . import sweep
from . import util


SHARP = "sharp"
SMOOTH = "smooth"
KERNELS = (SHARP, SMOOTH)
UNIT = "unit"
DYADIC = "dyadic"
SUPPORTS = {UNIT: (0.0, 1.0), DYADIC: (0.5, 2.0)}
INF = "inf"
SUP = "sup"
MODES = (INF, SUP)
MIN_SAMPLES = 4
PIN_CHUNK = 256

# Cap on (nodes x points) gathered at once in _bilinear_values
_GATHER_SIZE = 2**20


def bump(s):
    """exp(-1 / (s (1 - s))) on (0, 1), zero elsewhere."""
    s = np.asarray(s, dtype=float)
    out = np.zeros(s.shape)
    inside = (s > 0) & (s < 1)
    si = s[inside]
    out[inside] = np.exp(-1.0 / (si * (1.0 - si)))
    return out


@lru_cache(maxsize=1)
def bump_mass():
    """Integral of bump() over (0, 1), by a 2^16 point Riemann sum."""
    n = 2**16
    return float(bump(np.arange(1, n) / n).sum() / n)


class KernelSpec:
    """
    Kernel profile rho for B_r.

    kind "sharp" is the normalized indicator of the support, "smooth" the
    normalized bump. support "unit" is (0, 1], "dyadic" is (1/2, 2].
    """

    def __init__(self, kind=SHARP, support=UNIT):
        if kind not in KERNELS:
            raise errors.ValidationError(f"kernel must be one of {KERNELS}, got {kind!r}")
        if support not in SUPPORTS:
            raise errors.ValidationError(f"kernel support must be one of {tuple(SUPPORTS)}, got {support!r}")
        self.kind = kind
        self.support = support

    @property
    def bounds(self):
        return SUPPORTS[self.support]

    def profile(self, t):
        """rho(t), integrating to 1 over the support."""
        lo, hi = self.bounds
        width = hi - lo
        t = np.asarray(t, dtype=float)
        if self.kind == SHARP:
            return ((t > lo) & (t <= hi)) / width
        return bump((t - lo) / width) / (width * bump_mass())

    def nodes(self, r, h):
        """
        Grid node indices j (t_j = j*h) in the support scaled by r, and their
        weights. Weights sum to 1.
        """
        lo, hi = self.bounds
        first = int(np.floor(lo * r / h + 1e-9)) + 1
        last = int(np.floor(hi * r / h + 1e-9))
        j = np.arange(first, last + 1, dtype=np.int64)
        if len(j) == 0:
            raise errors.ResolutionError(f"no grid nodes in kernel support at scale {r}")
        if self.kind == SHARP:
            w = np.full(len(j), 1.0 / len(j))
        else:
            w = bump((j * h / r - lo) / (hi - lo))
            total = w.sum()
            if total <= 0:
                raise errors.ResolutionError(f"smooth kernel has no mass on the grid at scale {r}")
            w = w / total
        return j, w

    def to_dict(self):
        return {"kind": self.kind, "support": self.support}

    def __eq__(self, other):
        return isinstance(other, KernelSpec) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"KernelSpec(kind={self.kind!r}, support={self.support!r})"


class ScaleGrid:
    """Strictly decreasing scales r in (0, 1]."""

    def __init__(self, scales):
        scales = [float(r) for r in scales]
        if not scales:
            raise errors.ValidationError("scale grid is empty")
        offenders = [f"scale {r} outside (0, 1]" for r in scales if not 0 < r <= 1]
        offenders += [
            f"scales not strictly decreasing at {a}, {b}" for a, b in zip(scales, scales[1:]) if not b < a
        ]
        if offenders:
            raise errors.ValidationError("invalid scale grid", offenders=offenders)
        self.scales = tuple(scales)

    @classmethod
    def dyadic(cls, lo_exp, hi_exp):
        """2^-lo_exp, ..., 2^-hi_exp"""
        if hi_exp < lo_exp:
            raise errors.ValidationError(f"empty dyadic range {lo_exp}..{hi_exp}")
        return cls(util.dyadic_scales(lo_exp, hi_exp))

    @property
    def ks(self):
        """k = log2(1 / r) per scale."""
        return tuple(float(-np.log2(r)) for r in self.scales)

    def check(self, config):
        for r in self.scales:
            check_scale(r, config)
        return self

    def __iter__(self):
        return iter(self.scales)

    def __len__(self):
        return len(self.scales)

    def __repr__(self):
        return f"ScaleGrid({list(self.scales)})"


def as_scale_grid(scales):
    if isinstance(scales, ScaleGrid):
        return scales
    if np.ndim(scales) == 0:
        scales = [scales]
    return ScaleGrid(sorted(set(float(r) for r in scales), reverse=True))


def check_scale(r, config):
    """Raise unless 4h <= r <= 1."""
    if not 0 < r <= 1:
        raise errors.ValidationError(f"scale {r} outside (0, 1]")
    if r < MIN_SAMPLES * config.h * (1 - 1e-12):
        raise errors.ResolutionError(f"scale {r} is below {MIN_SAMPLES}h = {MIN_SAMPLES * config.h}")


def _kernel(kernel):
    return kernel if kernel is not None else KernelSpec()


def curve_nodes(P, r, kernel, config):
    """Index shifts for x - t_j and x - P(t_j), and node weights."""
    check_scale(r, config)
    j, w = _kernel(kernel).nodes(r, config.h)
    shifts = np.rint(P(j * config.h) / config.h).astype(np.int64)
    return j, shifts, w


def _bilinear_values(fv, gv, f_shifts, g_shifts, weights, idx):
    acc = np.zeros(len(idx), dtype=np.result_type(fv, gv, np.float64))
    if len(idx) == 0:
        return acc
    block = max(1, _GATHER_SIZE // len(idx))
    for start in range(0, len(weights), block):
        end = start + block
        fs = f_shifts[start:end, None]
        gs = g_shifts[start:end, None]
        w = weights[start:end, None]
        terms = w * fv.take(idx - fs, mode="wrap") * gv.take(idx - gs, mode="wrap")
        acc += terms.sum(axis=0)
    return acc


def _physical_pair(f, g):
    grid.check_compatible(f, g)
    if f.form != grid.PHYSICAL:
        raise errors.ValidationError("bilinear averages need physical form")


def bilinear_average(f, g, P, r, kernel=None):
    """
    B_r(f, g) on the whole grid.

    Parameters
    ----------
    f, g: GridFunction
        Physical form, same TorusConfig.
    P: curves.Curve
    r: float
        Scale in [4h, 1].
    kernel: KernelSpec, optional
        Defaults to the sharp kernel on (0, 1].

    Returns
    -------
    GridFunction
    """
    _physical_pair(f, g)
    j, s, w = curve_nodes(P, r, kernel, f.config)
    idx = np.arange(f.config.N)
    return grid.GridFunction(f.config, _bilinear_values(f.samples, g.samples, j, s, w, idx))


def single_average(f, r, kernel=None):
    """sum_j w_j f(x - t_j), the B_r(f, 1) reduction, computed by spectral convolution."""
    config = f.config
    check_scale(r, config)
    j, w = _kernel(kernel).nodes(r, config.h)
    values = np.zeros(config.N)
    np.add.at(values, j % config.N, w / config.h)
    return grid.convolve(f, grid.GridFunction(config, values))


def extremal_values(fv, gv, config, P, scales, mode, kernel, idx):
    if mode not in MODES:
        raise errors.ValidationError(f"mode must be one of {MODES}, got {mode!r}")
    scales = as_scale_grid(scales)
    best = None
    for r in scales:
        j, s, w = curve_nodes(P, r, kernel, config)
        values = _bilinear_values(fv, gv, j, s, w, idx)
        if mode == INF:
            if np.iscomplexobj(values):
                raise errors.ValidationError("inf mode needs real inputs")
            best = values if best is None else np.minimum(best, values)
        else:
            values = np.abs(values)
            best = values if best is None else np.maximum(best, values)
    return best


def extremal_average(f, g, P, scales, mode=SUP, kernel=None):
    """Pointwise inf of B_r(f, g), or sup of |B_r(f, g)|, over scales."""
    _physical_pair(f, g)
    idx = np.arange(f.config.N)
    values = extremal_values(f.samples, g.samples, f.config, P, scales, mode, kernel, idx)
    return grid.GridFunction(f.config, values)


def _mask_indices(A):
    return np.flatnonzero(A.mask.samples)


def pairing(A, P, r, kernel=None):
    """<1_A, B_r(1_A, 1_A)>, h-weighted."""
    idx = _mask_indices(A)
    if len(idx) == 0:
        check_scale(r, A.config)
        return 0.0
    j, s, w = curve_nodes(P, r, kernel, A.config)
    fv = A.mask.samples
    return float(A.config.h * _bilinear_values(fv, fv, j, s, w, idx).sum())


def pairing_profile(A, P, scales, kernel=None):
    """DataFrame of pairing(A, P, r) with columns r, value."""
    scales = as_scale_grid(scales)
    return pd.DataFrame({
        "r": list(scales),
        "value": [pairing(A, P, r, kernel=kernel) for r in scales],
    })


def pointwise_extremal(A, P, scales, mode=INF, kernel=None):
    """Pointwise extremum over scales of B_r(1_A, 1_A)."""
    return extremal_average(A.mask, A.mask, P, scales, mode=mode, kernel=kernel)


def paired_extremal(A, P, scales, mode=INF, kernel=None):
    """<1_A, pointwise_extremal(A, ...)>, evaluated on the points of A only."""
    scales = as_scale_grid(scales)
    idx = _mask_indices(A)
    if len(idx) == 0:
        scales.check(A.config)
        return 0.0
    fv = A.mask.samples
    values = extremal_values(fv, fv, A.config, P, scales, mode, kernel, idx)
    return float(A.config.h * values.sum())


def _sample_count(T, config):
    """Number of grid nodes t_j = j*h in (0, T]."""
    if not 0 < T <= 1:
        raise errors.ValidationError(f"T={T} outside (0, 1]")
    if T < MIN_SAMPLES * config.h * (1 - 1e-12):
        raise errors.ResolutionError(f"T={T} is below {MIN_SAMPLES}h = {MIN_SAMPLES * config.h}")
    return int(np.floor(T / config.h + 1e-9))


def pinned_profiles(A, P, T_grid, xs):
    """
    Pinned densities for every pin in xs and every T in T_grid.

    Returns an array of shape (len(xs), len(T_grid)).
    """
    config = A.config
    counts = np.array([_sample_count(T, config) for T in T_grid], dtype=np.int64)
    xs = np.asarray(xs, dtype=float)
    if len(xs) == 0 or len(counts) == 0:
        return np.zeros((len(xs), len(counts)))
    t = np.arange(1, counts.max() + 1) * config.h
    Pt = P(t)
    hits = A.contains(xs[:, None] - t[None, :]) & A.contains(xs[:, None] - Pt[None, :])
    cumulative = np.cumsum(hits, axis=1)
    return cumulative[:, counts - 1] / counts


def pinned_density(A, P, x, T):
    """
    Fraction of grid nodes t in (0, T] with x - t and x - P(t) both in A.

    Membership is exact, against the interval list.
    """
    return float(pinned_profiles(A, P, [T], [x])[0, 0])


def _pinned_chunk(task):
    A, P, T_grid, xs = task
    return pinned_profiles(A, P, T_grid, xs)


def pin_grid(count):
    """count evenly spaced pins in (0, 1], ending at 1."""
    if count < 1:
        raise errors.ValidationError(f"pin count must be >= 1, got {count}")
    return np.arange(1, count + 1) / count


class PinnedScan:
    """
    Result of pinned_scan().

    x is None when no pin was scanned. profile has columns T, value for the
    best pin. baseline_value is the best inf over the random baseline pins,
    or None if no baseline was requested.
    """

    def __init__(self, x, value, profile, values, pins, baseline_value=None, baseline_pins=0):
        self.x = x
        self.value = value
        self.profile = profile
        self.values = values
        self.pins = pins
        self.baseline_value = baseline_value
        self.baseline_pins = baseline_pins

    @property
    def dominates(self):
        """True unless a baseline pin beat the scanned best."""
        return self.baseline_value is None or self.value >= self.baseline_value

    def to_dict(self):
        return {
            "x": self.x,
            "value": self.value,
            "pins": self.pins,
            "baseline_value": self.baseline_value,
            "baseline_pins": self.baseline_pins,
            "dominates": self.dominates,
            "profile": self.profile.to_dict(orient="records"),
        }


def pinned_scan(A, P, T_grid, x_grid, baseline=0, seed=None, pins_in_set=False,
                worker_count=1, every=None):
    """
    Pin maximizing inf over T_grid of pinned_density(A, P, x, T).

    Parameters
    ----------
    A: sets.DensitySet
    P: curves.Curve
    T_grid: list of float
        Nonempty, each T in [4h, 1].
    x_grid: array-like of float
        Candidate pins. Ties go to the largest pin.
    baseline: int, default 0
        Number of pins drawn uniformly from (0, 1], or from A when
        pins_in_set, whose best inf value is reported alongside.
    seed: int, optional
        Baseline draw seed.
    pins_in_set: bool, default False
        Only scan pins inside A.
    worker_count: int, default 1
        Pin chunks are spread over this many processes.
    every: float, optional
        Progress output resolution in percent.

    Returns
    -------
    PinnedScan
    """
    T_grid = [float(T) for T in T_grid]
    if not T_grid:
        raise errors.ValidationError("T grid is empty")
    for T in T_grid:
        _sample_count(T, A.config)
    xs = np.asarray(x_grid, dtype=float)
    if pins_in_set:
        xs = xs[A.contains(xs)]

    if len(xs) == 0:
        profile = pd.DataFrame({"T": T_grid, "value": [0.0] * len(T_grid)})
        return PinnedScan(None, 0.0, profile, np.zeros(0), 0)

    tasks = [(A, P, T_grid, xs[i:i + PIN_CHUNK]) for i in range(0, len(xs), PIN_CHUNK)]
    chunks = sweep.run_tasks(_pinned_chunk, tasks, worker_count=worker_count, every=every, label="Pins")
    table = np.concatenate(chunks, axis=0)
    values = table.min(axis=1)
    best = len(values) - 1 - int(np.argmax(values[::-1]))
    profile = pd.DataFrame({"T": T_grid, "value": table[best]})

    baseline_value = None
    baseline_pins = 0
    if baseline > 0:
        rng = np.random.default_rng(seed)
        if pins_in_set:
            drawn = A.sample(int(baseline), rng)
        else:
            drawn = 1.0 - rng.random(int(baseline))
        baseline_pins = len(drawn)
        baseline_value = float(pinned_profiles(A, P, T_grid, drawn).min(axis=1).max())
    return PinnedScan(float(xs[best]), float(values[best]), profile, values, len(xs),
                      baseline_value=baseline_value, baseline_pins=baseline_pins)
