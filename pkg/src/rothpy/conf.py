import configparser
import os
from . import errors
from . import util


CONFIG_FILE = os.path.expanduser("~/.rothpy/config")

# Built-in defaults. Calibration values, not constants from any theorem.
DEFAULTS = {
    "grid": {
        "L": "4.0",
        "N": "65536",
    },
    "kernel": {
        "density": "sharp",
        "frequency": "smooth",
        "support": "unit",
    },
    "frequency": {
        "C": "3",
        "gside_factor": "auto",
    },
    "diagnostics": {
        "ratio_max": "10",
        "martingale_min": "0.2",
        "decay_slope_max": "0",
        "decay_normalize": "true",
        "key_c0": "0.1",
        "key_energy_min": "0.01",
    },
    "partition": {
        "c_p": "1e-3",
        "big_c_p": "1",
        "samples_per_j": "4",
    },
    "search": {
        "t0": "1e-3",
        "cooling": "0.995",
        "steps": "2000",
        "scale_lo": "3",
        "scale_hi": "10",
        "min_spacing": "1e-6",
        "calibration_slope_max": "4",
    },
    "run": {
        "threads": "1",
    },
}


def get_config(config_path=CONFIG_FILE):
    """Return a ConfigParser with built-in defaults overlaid by config_path.

    A missing file is not an error, a malformed one is.
    """
    # Keep option names case sensitive, "L" and "C" are meaningful
    config = configparser.ConfigParser()
    config.optionxform = str
    config.read_dict(DEFAULTS)
    if config_path:
        try:
            _ = config.read(config_path)
        except configparser.Error as e:
            raise errors.ConfigurationError(f"Could not parse config file {config_path}: {e}")
    return config


def get_float(config, section, option):
    try:
        return config.getfloat(section, option)
    except ValueError as e:
        raise errors.ConfigurationError(f"[{section}] {option}: {e}")


def get_int(config, section, option):
    try:
        return config.getint(section, option)
    except ValueError as e:
        raise errors.ConfigurationError(f"[{section}] {option}: {e}")


def get_bool(config, section, option):
    try:
        return config.getboolean(section, option)
    except ValueError as e:
        raise errors.ConfigurationError(f"[{section}] {option}: {e}")


def get_gside_factor(config, curve):
    """g-side frequency index multiplier, "auto" defers to the curve."""
    value = config.get("frequency", "gside_factor")
    if value.strip().lower() == "auto":
        return curve.scale_exponent
    try:
        return float(value)
    except ValueError as e:
        raise errors.ConfigurationError(f"[frequency] gside_factor: {e}")


def as_dict(config):
    """Plain nested dict of a ConfigParser, for reproducibility headers."""
    return {s: dict(config.items(s)) for s in config.sections()}


def save_config(config, config_path=CONFIG_FILE):
    # Write config data to disk
    util.mkdir_p(os.path.dirname(config_path))
    with open(config_path, mode="w", encoding="utf-8") as fh:
        config.write(fh)
