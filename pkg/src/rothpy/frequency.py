"""
Fourier projections, low/medium/high splitting, annular pieces and band
energies.

All multipliers are functions of the physical frequency xi / L (cycles per
unit length). The cutoff phi_hat is 1 on |u| <= 1/8, 0 on |u| >= 1/2, with a
monotone C-infinity bridge in between. The scale-k projection multiplies by
phi_hat(2^-k u).
"""
import numpy as np
import pandas as pd
from . import errors
from . import grid
from . import util


PASS_EDGE = 1.0 / 8.0
STOP_EDGE = 1.0 / 2.0
PIECES = ("L", "M", "H")


def _glue(x):
    """exp(-1/x) for x > 0, 0 otherwise."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(x):
    """0 for x <= 0, 1 for x >= 1, g(x) / (g(x) + g(1 - x)) in between."""
    a = _glue(x)
    b = _glue(1.0 - np.asarray(x, dtype=float))
    return a / (a + b)


def phi_hat(u):
    """Radial cutoff profile evaluated at physical frequency u."""
    u = np.abs(np.asarray(u, dtype=float))
    return 1.0 - smooth_step((u - PASS_EDGE) / (STOP_EDGE - PASS_EDGE))


class ProjectionSpec:
    """phi_hat(2^-k u), the multiplier of phi_k."""

    def __init__(self, k):
        self.k = float(k)

    def multiplier(self, config):
        return phi_hat(config.physical_frequencies * 2.0**-self.k)

    @property
    def pass_band(self):
        """|u| at or below which the multiplier is exactly 1."""
        return PASS_EDGE * 2.0**self.k

    @property
    def stop_band(self):
        """|u| at or above which the multiplier is exactly 0."""
        return STOP_EDGE * 2.0**self.k


def project(f, k):
    """Inverse transform of transform(f) * phi_hat(2^-k u)."""
    return grid.apply_multiplier(f, ProjectionSpec(k).multiplier(f.config))


def resolution_floor(config):
    """Smallest scale index whose projection resolves the torus, -log2(L)."""
    return -np.log2(config.L)


def nyquist_ceiling(config):
    """Largest scale index whose high-pass edge is representable, log2(4/h)."""
    return np.log2(4.0 / config.h)


class BandDecomposition:
    """
    f = f_L + f_M + f_H at effective indices l_delta <= k_delta.

    l_delta and k_delta already include the g-side factor when g_side is set.
    """

    def __init__(self, f_L, f_M, f_H, l, k, delta, C, l_delta, k_delta, g_side=False, factor=1.0):
        self.f_L = f_L
        self.f_M = f_M
        self.f_H = f_H
        self.l = l
        self.k = k
        self.delta = delta
        self.C = C
        self.l_delta = l_delta
        self.k_delta = k_delta
        self.g_side = g_side
        self.factor = factor

    @property
    def pieces(self):
        return {"L": self.f_L, "M": self.f_M, "H": self.f_H}

    def reconstruct(self):
        return self.f_L + self.f_M + self.f_H

    def energies(self):
        """
        Per-piece l2 energy and nominal spectral support in cycles per unit.

        Returns
        -------
        pandas.DataFrame
            Columns piece, l2_energy, support_lo, support_hi.
        """
        nyq = self.f_L.config.nyquist
        lo_edge = 2.0**self.l_delta
        hi_edge = 2.0**self.k_delta
        supports = {
            "L": (0.0, min(STOP_EDGE * lo_edge, nyq)),
            "M": (min(PASS_EDGE * lo_edge, nyq), min(STOP_EDGE * hi_edge, nyq)),
            "H": (min(PASS_EDGE * hi_edge, nyq), nyq),
        }
        rows = []
        for name, piece in self.pieces.items():
            lo, hi = supports[name]
            rows.append({"piece": name, "l2_energy": grid.norm(piece, 2), "support_lo": lo, "support_hi": hi})
        return pd.DataFrame(rows, columns=["piece", "l2_energy", "support_lo", "support_hi"])

    def params(self):
        return {
            "l": self.l,
            "k": self.k,
            "delta": self.delta,
            "C": self.C,
            "l_delta": self.l_delta,
            "k_delta": self.k_delta,
            "g_side": self.g_side,
            "factor": self.factor,
        }


def effective_indices(l, k, delta, C, g_side=False, factor=2.0):
    """
    (l_delta, k_delta) = (l - C log2(1/delta), k + C log2(1/delta)), each
    multiplied by factor on the g side.
    """
    if not 0 < delta <= 1:
        raise errors.ValidationError(f"delta must be in (0, 1], got {delta}")
    if l > k:
        raise errors.RangeError(f"l={l} must be <= k={k}")
    shift = C * util.log2_inv(delta)
    l_delta = l - shift
    k_delta = k + shift
    if g_side:
        l_delta *= factor
        k_delta *= factor
    return l_delta, k_delta


def check_indices(config, l_delta, k_delta):
    floor = resolution_floor(config)
    ceiling = nyquist_ceiling(config)
    if l_delta < floor - 1e-12:
        raise errors.RangeError(
            f"l_delta={l_delta:.6g} below resolution floor {floor:.6g} (2^-l_delta must be <= L={config.L})"
        )
    if k_delta > ceiling + 1e-12:
        raise errors.RangeError(
            f"k_delta={k_delta:.6g} above Nyquist ceiling {ceiling:.6g} (2^-k_delta must be >= h/4)"
        )


def decompose_lmh(f, l, k, delta, C=3.0, g_side=False, factor=2.0):
    """
    Split f into low, medium and high frequency pieces.

    f_L = phi_{l_delta} f, f_H = (1 - phi_{k_delta}) f and f_M is the rest,
    so the pieces sum back to f.

    Parameters
    ----------
    f: GridFunction
    l, k: float
        Scale indices, l <= k.
    delta: float
        Density in (0, 1].
    C: float, default 3
        Log-factor constant.
    g_side: bool, default False
        Multiply the effective indices by factor.
    factor: float, default 2
        g-side index multiplier, the curve's scaling exponent.

    Returns
    -------
    BandDecomposition
    """
    l_delta, k_delta = effective_indices(l, k, delta, C, g_side=g_side, factor=factor)
    check_indices(f.config, l_delta, k_delta)
    f_L = project(f, l_delta)
    f_H = f - project(f, k_delta)
    f_M = f - f_L - f_H
    return BandDecomposition(f_L, f_M, f_H, l, k, delta, C, l_delta, k_delta,
                             g_side=g_side, factor=factor if g_side else 1.0)


def annulus_multiplier(config, m):
    """Psi(2^-m u) = phi_hat(2^-(m+1) u) - phi_hat(2^-m u)."""
    u = config.physical_frequencies
    return phi_hat(u * 2.0**-(m + 1)) - phi_hat(u * 2.0**-m)


def annular_range(config):
    """
    (m_lo, m_hi) such that

        f = project(f, m_lo) + sum_{m_lo <= m <= m_hi} annular_piece(f, m)

    project(f, m_lo) keeps only the zero mode, and phi_hat(2^-(m_hi+1) u) is
    1 at every representable frequency.
    """
    m_lo = int(np.floor(np.log2(1.0 / (STOP_EDGE * config.L))))
    m_hi = int(np.ceil(np.log2(config.nyquist / PASS_EDGE))) - 1
    return m_lo, m_hi


def annular_piece(f, m):
    """f_m, spectrum restricted to 2^m / 8 < |u| < 2^m."""
    return grid.apply_multiplier(f, annulus_multiplier(f.config, m))


def _as_function(A_or_f):
    if isinstance(A_or_f, grid.GridFunction):
        return A_or_f
    return A_or_f.mask


def band_energy(A_or_f, lo, hi):
    """
    l2 mass of the spectrum over the band lo < |u| <= hi, u = xi / L.

    Accepts a DensitySet (its mask is used) or a GridFunction. The band is
    half-open so that adjacent bands add up and lo = 0 excludes the zero
    mode.
    """
    if lo < 0 or hi < lo:
        raise errors.ValidationError(f"band must satisfy 0 <= lo <= hi, got [{lo}, {hi}]")
    f = _as_function(A_or_f)
    F = grid.transform(f)
    u = np.abs(f.config.physical_frequencies)
    inside = (u > lo) & (u <= hi)
    return float(np.sqrt(np.sum(np.abs(F.samples[inside])**2) / f.config.L))


def key_bands(l, k, delta, C=3.0, factor=2.0):
    """The two bands delta^C 2^l .. delta^-C 2^k and delta^C 2^(factor l) .. delta^-C 2^(factor k)."""
    return [
        (delta**C * 2.0**l, delta**-C * 2.0**k),
        (delta**C * 2.0**(factor * l), delta**-C * 2.0**(factor * k)),
    ]


def key_band_energy(A, l, k, delta, C=3.0, factor=2.0):
    """Sum of band_energy(A, band) over key_bands()."""
    return float(sum(band_energy(A, lo, hi) for lo, hi in key_bands(l, k, delta, C=C, factor=factor)))
