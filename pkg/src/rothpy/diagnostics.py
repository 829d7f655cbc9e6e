"""
Numerical probes of inequalities that hold up to unspecified constants.

Each probe computes an observed statistic, compares it with a configured
threshold and returns a ProbeReport. Thresholds are calibration values. A
probe with passed None only records its statistic.
"""
import math
import numpy as np
import pandas as pd
from . import averages
from . import conf
from . import curves
from . import errors
from . import frequency
from . import grid
from . import partition
from . import sets
from . import sweep
from . import util


SUITES = ("core", "mart", "bil2", "decay", "positivity", "pinned", "partition", "key", "acceptance")


class ProbeReport:
    """
    Outcome of one probe.

    Parameters
    ----------
    name: str
    inputs: dict
        Summary of what was probed (delta, N, scales, seed, ...).
    statistic: float
        Observed value.
    baseline: float, optional
        Value the statistic is compared against, if any.
    threshold: float, optional
        Configured pass threshold.
    passed: bool or None
        None when the statistic is recorded only.
    details: pandas.DataFrame, optional
    notes: list of str, optional
    summary: dict, optional
        Secondary statistics recorded next to the one that is judged.
    """

    def __init__(self, name, inputs, statistic, baseline=None, threshold=None, passed=None,
                 details=None, notes=None, summary=None):
        self.name = name
        self.inputs = inputs
        self.statistic = statistic
        self.baseline = baseline
        self.threshold = threshold
        self.passed = passed
        self.details = details if details is not None else pd.DataFrame()
        self.notes = list(notes) if notes else []
        self.summary = dict(summary) if summary else {}

    @property
    def failed(self):
        return self.passed is False

    def to_dict(self):
        return {
            "name": self.name,
            "inputs": self.inputs,
            "statistic": _plain(self.statistic),
            "baseline": _plain(self.baseline),
            "threshold": _plain(self.threshold),
            "passed": self.passed,
            "notes": self.notes,
            "summary": {k: _plain(v) for k, v in self.summary.items()},
            "details": [{k: _plain(v) for k, v in row.items()} for row in self.details.to_dict(orient="records")],
        }

    def __repr__(self):
        return f"ProbeReport({self.name!r}, statistic={self.statistic!r}, passed={self.passed!r})"


def _plain(value):
    """JSON friendly scalar, nan and inf become None."""
    if value is None:
        return None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def random_function(config, rng, lo=0.0, hi=1.0):
    """Uniform [0, 1) samples on grid points in [lo, hi), zero elsewhere."""
    x = config.x
    inside = (x >= lo) & (x < hi)
    values = np.zeros(config.N)
    values[inside] = rng.random(int(inside.sum()))
    return grid.GridFunction(config, values)


def _check_unit_range(f):
    if f.form != grid.PHYSICAL or f.is_complex:
        raise errors.ValidationError("expected a real physical function")
    offenders = []
    if np.any(f.samples < -1e-12) or np.any(f.samples > 1 + 1e-12):
        offenders.append("values outside [0, 1]")
    if np.any(f.samples[f.config.x > 1.0] != 0):
        offenders.append("support outside [0, 1]")
    if offenders:
        raise errors.ValidationError("function out of range", offenders=offenders)


def martingale_triple(f, r, s):
    """h-weighted integral of f (rho_r * f)(rho_s * f), sharp kernel averages."""
    _check_unit_range(f)
    kernel = averages.KernelSpec(averages.SHARP)
    fr = averages.single_average(f, r, kernel=kernel).samples
    fs = averages.single_average(f, s, kernel=kernel).samples
    return float(f.config.h * np.sum(f.samples * fr * fs))


def _l1(values, config, restrict):
    if restrict:
        values = values[config.x <= 1.0]
    return float(config.h * np.sum(np.abs(values)))


def maximal_ratio(f, g, P, scales, kernel=None, restrict=False):
    """
    ||sup_r |B_r(f, g)| ||_1 / (||f||_2 ||g||_2).

    The L1 norm is over the torus, or over [0, 1] if restrict is True.
    """
    denominator = grid.norm(f, 2) * grid.norm(g, 2)
    if denominator == 0:
        raise errors.ValidationError("maximal_ratio needs nonzero f and g")
    sup = averages.extremal_average(f, g, P, scales, mode=averages.SUP, kernel=kernel)
    return _l1(sup.samples, f.config, restrict) / denominator


def scale_decay_probe(f, g, P, k, m_range, p=0, kernel=None, normalize=True, factor=None,
                      slope_max=0.0):
    """
    ||B_{2^-k}(f_{k+m}, g_{e k+m+p})||_1 over m, and the slope of its log2.

    e is factor, the curve's scaling exponent by default. Values are also
    divided by the l2 norms of the two annular pieces; the slope is fit on
    those when normalize is True. Values of 0 (vanishing piece) are left out
    of the fit. Both slopes are kept in summary as raw_slope and
    normalized_slope.

    Returns
    -------
    ProbeReport
        statistic is the slope, passed is slope < slope_max. details has
        columns m, f_index, g_index, value, normalized, included.
    """
    if p not in (-1, 0, 1):
        raise errors.ValidationError(f"p must be -1, 0 or 1, got {p}")
    ms = [int(m) for m in m_range]
    if len(ms) < 4:
        raise errors.ValidationError(f"m_range needs at least 4 points, got {len(ms)}")
    kernel = kernel if kernel is not None else averages.KernelSpec(averages.SMOOTH)
    factor = P.scale_exponent if factor is None else factor
    config = f.config
    r = 2.0**-k
    averages.check_scale(r, config)
    m_lo, m_hi = frequency.annular_range(config)

    rows = []
    for m in ms:
        fi = k + m
        gi = int(round(factor * k)) + m + p
        if not m_lo <= fi <= m_hi:
            raise errors.RangeError(f"f annulus index {fi} outside representable range [{m_lo}, {m_hi}]")
        f_piece = frequency.annular_piece(f, fi)
        g_piece = frequency.annular_piece(g, gi)
        value = grid.norm(averages.bilinear_average(f_piece, g_piece, P, r, kernel=kernel), 1)
        norms = grid.norm(f_piece, 2) * grid.norm(g_piece, 2)
        normalized = value / norms if norms > 0 else 0.0
        rows.append({"m": m, "f_index": fi, "g_index": gi, "value": value,
                     "normalized": normalized, "included": value > 0})
    details = pd.DataFrame(rows, columns=["m", "f_index", "g_index", "value", "normalized", "included"])
    fit = details[details["included"]]
    slopes = {
        column: util.fit_slope(fit["m"], np.log2(fit[column])) if len(fit) else float("nan")
        for column in ("value", "normalized")
    }
    slope = slopes["normalized" if normalize else "value"]
    notes = []
    if len(fit) < len(details):
        notes.append(f"{len(details) - len(fit)} vanishing pieces excluded from fit")
    return ProbeReport(
        "scale_decay",
        {"k": k, "m_range": ms, "p": p, "N": config.N, "factor": factor, "normalize": normalize,
         "kernel": kernel.to_dict()},
        slope,
        threshold=slope_max,
        passed=bool(math.isfinite(slope) and slope < slope_max),
        details=details,
        notes=notes,
        summary={"raw_slope": slopes["value"], "normalized_slope": slopes["normalized"]},
    )


def decompose_pair(A, l, k, delta, C, factor):
    """
    f-side and g-side decompositions of 1_A.

    The g-side indices are scaled by factor and clamped into the
    representable range. Returns (f_dec, g_dec, notes).
    """
    mask = A.mask
    f_dec = frequency.decompose_lmh(mask, l, k, delta, C=C)
    l_g, k_g = frequency.effective_indices(l, k, delta, C, g_side=True, factor=factor)
    floor = frequency.resolution_floor(A.config)
    ceiling = frequency.nyquist_ceiling(A.config)
    notes = []
    if l_g < floor or k_g > ceiling:
        notes.append(f"g-side indices ({l_g:.4g}, {k_g:.4g}) clamped to [{floor:.4g}, {ceiling:.4g}]")
    l_g = max(l_g, floor)
    k_g = min(k_g, ceiling)
    g_L = frequency.project(mask, l_g)
    g_H = mask - frequency.project(mask, k_g)
    g_M = mask - g_L - g_H
    g_dec = frequency.BandDecomposition(g_L, g_M, g_H, l, k, delta, C, l_g, k_g, g_side=True, factor=factor)
    return f_dec, g_dec, notes


def high_piece_smallness(A, P, scales, l, k, delta=None, C=3.0, kernel=None, factor=None):
    """
    h-weighted sum over A of sup_r |B_r(f_H, g_L + g_M)| for f = g = 1_A.

    passed is statistic <= delta^C. details records the crude bound
    |A| ||f_H||_inf ||g_L + g_M||_inf.
    """
    delta = A.density if delta is None else delta
    kernel = kernel if kernel is not None else averages.KernelSpec(averages.SMOOTH)
    factor = P.scale_exponent if factor is None else factor
    scales = averages.as_scale_grid(scales).check(A.config)
    inputs = {"delta": delta, "l": l, "k": k, "C": C, "N": A.config.N, "scales": list(scales)}
    threshold = delta**C
    if A.is_empty:
        return ProbeReport("high_piece_smallness", inputs, 0.0, threshold=threshold, passed=True)

    f_dec, g_dec, notes = decompose_pair(A, l, k, delta, C, factor)
    g_low = g_dec.f_L + g_dec.f_M
    idx = np.flatnonzero(A.mask.samples)
    sup = averages.extremal_values(f_dec.f_H.samples, g_low.samples, A.config, P, scales,
                                    averages.SUP, kernel, idx)
    statistic = float(A.config.h * sup.sum())
    bound = A.config.h * len(idx) * grid.norm(f_dec.f_H, np.inf) * grid.norm(g_low, np.inf)
    details = pd.DataFrame([{"f_H_sup": grid.norm(f_dec.f_H, np.inf), "g_low_sup": grid.norm(g_low, np.inf),
                             "bound": bound, "l_delta": f_dec.l_delta, "k_delta": f_dec.k_delta}])
    return ProbeReport("high_piece_smallness", inputs, statistic, baseline=bound, threshold=threshold,
                       passed=bool(statistic <= threshold), details=details, notes=notes)


def low_product_identity(A, P, r, l, k, delta=None, C=3.0, kernel=None, factor=None):
    """
    sup over grid points of [0, 1] of |B_r(f_L, g_L) - f_L g_L|.

    f_L and g_L are the low pieces of 1_A at l_delta and factor * l_delta.
    An r outside [2^-k, 2^-l] is noted, not rejected. The statistic is
    recorded only.
    """
    delta = A.density if delta is None else delta
    kernel = kernel if kernel is not None else averages.KernelSpec(averages.SMOOTH)
    factor = P.scale_exponent if factor is None else factor
    l_delta, _ = frequency.effective_indices(l, k, delta, C)
    notes = []
    if not 2.0**-k <= r <= 2.0**-l:
        notes.append(f"r={r} outside the regime [2^-{k}, 2^-{l}]")
    f_L = frequency.project(A.mask, l_delta)
    g_L = frequency.project(A.mask, factor * l_delta)
    diff = averages.bilinear_average(f_L, g_L, P, r, kernel=kernel) - f_L * g_L
    inside = A.config.x <= 1.0
    statistic = float(np.max(np.abs(diff.samples[inside])))
    inputs = {"delta": delta, "r": r, "l": l, "k": k, "C": C, "N": A.config.N, "factor": factor}
    return ProbeReport("low_product_identity", inputs, statistic, notes=notes)


def three_term_probe(A, P, scales, kernel=None, c0=0.1):
    """
    h-weighted sum over A of
    sup|B_r(1_B, 1_B)| + sup|B_r(1_A, 1_B)| + sup|B_r(1_B, 1_A)|, B = [0, 1] minus A.

    baseline is the lower bound
    sum over A of (min_r B_r(1, 1) - inf_r B_r(1_A, 1_A)),
    which the statistic can never fall below. threshold is
    (1 - c0 delta^2 / 1000) delta, recorded in details.
    """
    kernel = kernel if kernel is not None else averages.KernelSpec(averages.SHARP)
    scales = averages.as_scale_grid(scales).check(A.config)
    config = A.config
    delta = A.density
    inputs = {"delta": delta, "N": config.N, "scales": list(scales), "c0": c0}
    threshold = (1 - c0 * delta**2 / 1000) * delta
    idx = np.flatnonzero(A.mask.samples)
    if len(idx) == 0:
        return ProbeReport("three_term", inputs, 0.0, baseline=0.0, threshold=threshold, passed=True)

    a = A.mask.samples
    b = sets.complement(A).mask.samples
    u = a + b

    def paired(fv, gv, mode):
        return float(config.h * averages.extremal_values(fv, gv, config, P, scales, mode, kernel, idx).sum())

    terms = {
        "BB": paired(b, b, averages.SUP),
        "AB": paired(a, b, averages.SUP),
        "BA": paired(b, a, averages.SUP),
    }
    statistic = sum(terms.values())
    full_inf = paired(u, u, averages.INF)
    set_inf = paired(a, a, averages.INF)
    lower = full_inf - set_inf
    details = pd.DataFrame([dict(terms, full_inf=full_inf, set_inf=set_inf, lower=lower,
                                 threshold=threshold, above_threshold=statistic >= threshold)])
    return ProbeReport("three_term", inputs, statistic, baseline=lower, threshold=threshold,
                       passed=bool(statistic >= lower - 1e-12), details=details)


def key_dichotomy_probe(A, P, l, k, delta=None, C=3.0, c0=0.1, energy_min=0.01, kernel=None, factor=None):
    """
    If sum over A of inf_{2^-k <= r <= 2^-l} B_r(1_A, 1_A) < c0 delta^3, the
    two-band energy of 1_A must be at least energy_min delta^3.

    statistic is the paired inf, baseline the two-band energy. passed is the
    implication.
    """
    delta = A.density if delta is None else delta
    factor = P.scale_exponent if factor is None else factor
    scales = averages.ScaleGrid.dyadic(l, k).check(A.config)
    lhs = averages.paired_extremal(A, P, scales, mode=averages.INF, kernel=kernel)
    energy = frequency.key_band_energy(A, l, k, delta, C=C, factor=factor)
    small = lhs < c0 * delta**3
    holds = (not small) or energy >= energy_min * delta**3
    details = pd.DataFrame([{"paired_inf": lhs, "pairing_threshold": c0 * delta**3, "small": small,
                             "energy": energy, "energy_threshold": energy_min * delta**3}])
    inputs = {"delta": delta, "l": l, "k": k, "C": C, "c0": c0, "energy_min": energy_min, "N": A.config.N}
    return ProbeReport("key_dichotomy", inputs, lhs, baseline=energy, threshold=c0 * delta**3,
                       passed=bool(holds), details=details)


def avoiding_comparison(P, r, delta=0.2, seed=1, baseline_seeds=20, pieces=32, config=None, kernel=None):
    """
    Pairing of a quadratic-avoiding set against random sets of equal density.

    statistic is pairing(A, P, r) for the avoiding set built with seed.
    baseline is the mean pairing over random_set(delta, pieces, seed=i) for
    i in range(baseline_seeds). Recorded only, passed is None. summary
    records whether the avoiding set came in below the random mean.
    """
    if baseline_seeds < 1:
        raise errors.ValidationError(f"baseline_seeds must be >= 1, got {baseline_seeds}")
    config = config if config is not None else grid.TorusConfig()
    avoiding = sets.structured_set(sets.QUADRATIC, delta, config=config, pieces=pieces, seed=seed, curve=P)
    statistic = averages.pairing(avoiding, P, r, kernel=kernel)
    rows = []
    for i in range(baseline_seeds):
        R = sets.random_set(delta, pieces, seed=i, config=config)
        rows.append({"seed": i, "density": R.density, "value": averages.pairing(R, P, r, kernel=kernel)})
    details = pd.DataFrame(rows)
    baseline = float(details["value"].mean())
    inputs = {"delta": delta, "r": r, "seed": seed, "baseline_seeds": baseline_seeds,
              "pieces": pieces, "N": config.N}
    summary = {"avoiding_density": avoiding.density, "below_random_mean": statistic < baseline}
    return ProbeReport("avoiding_comparison", inputs, statistic, baseline=baseline, details=details,
                       summary=summary)


# Corpus probes. Task functions are module level so sweep workers can pickle them.

def _martingale_task(task):
    A, scales = task
    f = A.mask
    cube = A.density**3
    averaged = {r: averages.single_average(f, r, kernel=averages.KernelSpec(averages.SHARP)).samples
                for r in scales}
    rows = []
    for i, r in enumerate(scales):
        for s in scales[i:]:
            value = float(f.config.h * np.sum(f.samples * averaged[r] * averaged[s]))
            rows.append({"label": A.label, "delta": A.density, "r": r, "s": s, "value": value,
                         "ratio": value / cube if cube > 0 else float("nan")})
    return rows


def martingale_corpus(corpus, scales, ratio_min=0.2, worker_count=1, every=None):
    """Minimum of martingale_triple / delta^3 over sets and scale pairs r >= s."""
    scales = list(averages.as_scale_grid(scales))
    results = sweep.run_tasks(_martingale_task, [(A, scales) for A in corpus],
                              worker_count=worker_count, every=every, label="Sets")
    details = pd.DataFrame([row for rows in results for row in rows],
                           columns=["label", "delta", "r", "s", "value", "ratio"])
    worst = details.loc[details["ratio"].idxmin()]
    notes = [f"minimum at {worst['label']} r={worst['r']} s={worst['s']}"]

    # Degree 3 homogeneity on the first set
    f = corpus[0].mask
    base = martingale_triple(f, scales[0], scales[-1])
    scaled = martingale_triple(f * 0.5, scales[0], scales[-1])
    homogeneous = abs(scaled - 0.125 * base) <= 1e-10 * max(abs(base), 1e-300)
    if not homogeneous:
        notes.append(f"homogeneity violated: {scaled} vs {0.125 * base}")
    return ProbeReport(
        "martingale",
        {"sets": len(corpus), "scales": scales, "N": f.config.N},
        float(worst["ratio"]),
        threshold=ratio_min,
        passed=bool(worst["ratio"] >= ratio_min and homogeneous),
        details=details,
        notes=notes,
    )


def _ratio_task(task):
    config, seed, P, scales, kernel = task
    rng = np.random.default_rng(seed)
    f = random_function(config, rng)
    g = random_function(config, rng)
    return maximal_ratio(f, g, P, scales, kernel=kernel)


def maximal_corpus(config, count, scales, P=None, kernel=None, seed=0, ratio_max=10.0,
                   worker_count=1, every=None):
    """Largest maximal_ratio over count seeded random pairs."""
    P = P if P is not None else curves.Curve.monomial(2)
    scales = averages.as_scale_grid(scales).check(config)
    tasks = [(config, [seed, i], P, scales, kernel) for i in range(count)]
    ratios = sweep.run_tasks(_ratio_task, tasks, worker_count=worker_count, every=every, label="Pairs")
    details = pd.DataFrame({"pair": range(count), "ratio": ratios})
    worst = float(details["ratio"].max())
    return ProbeReport("maximal_ratio", {"pairs": count, "scales": list(scales), "N": config.N, "seed": seed},
                       worst, threshold=ratio_max, passed=bool(worst <= ratio_max), details=details)


def _decay_task(task):
    config, seed, P, k, m_range, normalize = task
    rng = np.random.default_rng(seed)
    f = random_function(config, rng)
    g = random_function(config, rng)
    report = scale_decay_probe(f, g, P, k, m_range, normalize=normalize)
    return report.statistic, report.summary["raw_slope"], report.summary["normalized_slope"]


def decay_corpus(config, count, k, m_range, P=None, seed=0, normalize=True, slope_max=0.0,
                 fraction_min=0.9, worker_count=1, every=None):
    """
    Fraction of seeded random pairs whose decay slope is below slope_max.

    details keeps the raw and normalized slope of every pair. The judged
    slope is the normalized one unless normalize is False.
    """
    P = P if P is not None else curves.Curve.monomial(2)
    tasks = [(config, [seed, i], P, k, list(m_range), normalize) for i in range(count)]
    results = sweep.run_tasks(_decay_task, tasks, worker_count=worker_count, every=every, label="Pairs")
    details = pd.DataFrame(results, columns=["slope", "raw_slope", "normalized_slope"])
    details.insert(0, "pair", range(count))
    details["decays"] = details["slope"] < slope_max
    fraction = float(details["decays"].mean())
    raw_rising = int((details["raw_slope"] > 0).sum())
    notes = [f"raw slope positive on {raw_rising} of {count} pairs"] if raw_rising else []
    return ProbeReport("scale_decay_corpus",
                       {"pairs": count, "k": k, "m_range": list(m_range), "N": config.N, "seed": seed,
                        "normalize": normalize},
                       fraction, threshold=fraction_min, passed=bool(fraction >= fraction_min), details=details,
                       notes=notes, summary={"median_raw_slope": float(details["raw_slope"].median()),
                                             "median_normalized_slope": float(details["normalized_slope"].median())})


def _positivity_task(task):
    A, P, scales = task
    return partition.global_inf(A, P, scales)


def positivity_corpus(corpus, P, scales, c=1e-3, worker_count=1, every=None):
    """Smallest global_inf / delta^3 over the corpus, must be >= c."""
    scales = averages.as_scale_grid(scales)
    values = sweep.run_tasks(_positivity_task, [(A, P, scales) for A in corpus],
                             worker_count=worker_count, every=every, label="Sets")
    details = pd.DataFrame({
        "label": [A.label for A in corpus],
        "delta": [A.density for A in corpus],
        "global_inf": values,
    })
    details["ratio"] = details["global_inf"] / details["delta"]**3
    worst = float(details["ratio"].min())
    return ProbeReport("positivity", {"sets": len(corpus), "scales": list(scales)}, worst,
                       threshold=c, passed=bool(worst >= c), details=details)


def pinned_corpus(corpus, P, T_grid, pins, c=1e-2, baseline=100, seed=0, worker_count=1, every=None):
    """Smallest best-pin value / delta^2 over the corpus, must be >= c."""
    rows = []
    for i, A in enumerate(corpus):
        scan = averages.pinned_scan(A, P, T_grid, averages.pin_grid(pins), baseline=baseline,
                                    seed=[seed, i], worker_count=worker_count)
        rows.append({"label": A.label, "delta": A.density, "x": scan.x, "value": scan.value,
                     "baseline": scan.baseline_value, "dominates": scan.dominates})
    details = pd.DataFrame(rows, columns=["label", "delta", "x", "value", "baseline", "dominates"])
    details["ratio"] = details["value"] / details["delta"]**2
    worst = float(details["ratio"].min())
    beaten = int((~details["dominates"]).sum())
    notes = [f"random pins beat the scanned best on {beaten} of {len(details)} sets"] if beaten else []
    return ProbeReport("pinned", {"sets": len(corpus), "T_grid": list(T_grid), "pins": pins}, worst,
                       threshold=c, passed=bool(worst >= c and beaten == 0), details=details, notes=notes)


def partition_corpus(corpus, P, depth, c_p=1e-3, samples_per_j=4, big_c_p=1.0, worker_count=1):
    """Exceptional counts against C_P delta^-5 log2(1/delta) over the corpus."""
    rows = []
    for A in corpus:
        report = partition.partition_report(A, P, partition.dyadic_partition(depth), c_p=c_p,
                                            samples_per_j=samples_per_j, big_c_p=big_c_p,
                                            worker_count=worker_count)
        rows.append({"label": A.label, "delta": A.density, "exceptional": report.exceptional_count,
                     "bound": report.bound, "within": report.within_bound})
    details = pd.DataFrame(rows, columns=["label", "delta", "exceptional", "bound", "within"])
    worst = int(details["exceptional"].max()) if len(details) else 0
    return ProbeReport("partition_corpus", {"sets": len(corpus), "depth": depth, "c_p": c_p}, worst,
                       passed=bool(details["within"].all()), details=details)


# Suites

def _core_suite(settings, seed, worker_count):
    config = grid.TorusConfig(L=4.0, N=2**8)
    rng = np.random.default_rng(seed)
    P = curves.Curve.monomial(2)
    r = 2.0**-4
    radii = [2.0**-4, 2.0**-3, 2.0**-2]
    reports = []

    errs = {name: [] for name in ("convolve_oracle", "bilinear_oracle", "pairing_oracle",
                                  "hl_maximal_oracle", "project_oracle", "decompose_oracle")}
    for _ in range(20):
        f = grid.GridFunction(config, rng.standard_normal(config.N))
        g = grid.GridFunction(config, rng.standard_normal(config.N))
        u = grid.GridFunction(config, rng.random(config.N))
        A = sets.random_set(float(rng.uniform(0.1, 0.5)), 8, seed=int(rng.integers(2**31)), config=config)
        errs["convolve_oracle"].append(_sup_diff(grid.convolve(f, g).samples, direct_convolve(f, g)))
        errs["bilinear_oracle"].append(
            _sup_diff(averages.bilinear_average(f, g, P, r).samples, direct_bilinear(f, g, P, r)))
        errs["pairing_oracle"].append(abs(averages.pairing(A, P, r) - direct_pairing(A, P, r)))
        errs["hl_maximal_oracle"].append(_sup_diff(grid.hl_maximal(u, radii).samples, direct_hl_maximal(u, radii)))
        errs["project_oracle"].append(_sup_diff(frequency.project(f, 3).samples, direct_project(f, 3)))
        dec = frequency.decompose_lmh(f, 0, 2, 0.5, C=1.0)
        expected = direct_decompose(f, dec.l_delta, dec.k_delta)
        errs["decompose_oracle"].append(max(_sup_diff(piece.samples, expected[name])
                                            for name, piece in dec.pieces.items()))
    for name, values in errs.items():
        reports.append(_limit_report(name, values, 1e-6, config, seed))

    # Exactness on a larger grid
    config = grid.TorusConfig(L=4.0, N=2**12)
    roundtrip, parseval, reconstruction = [], [], []
    for _ in range(100):
        f = grid.GridFunction(config, rng.standard_normal(config.N))
        roundtrip.append(grid.norm(grid.inverse(grid.transform(f)) - f, np.inf))
        n2 = grid.norm(f, 2)
        parseval.append(abs(grid.spectral_norm(grid.transform(f)) - n2) / n2)
        dec = frequency.decompose_lmh(f, 0, 4, 0.5, C=1.0)
        reconstruction.append(grid.norm(dec.reconstruct() - f, np.inf))
    reports.append(_limit_report("transform_roundtrip", roundtrip, 1e-10, config, seed))
    reports.append(_limit_report("parseval", parseval, 1e-12, config, seed))
    reports.append(_limit_report("reconstruction", reconstruction, 1e-12, config, seed))

    config = grid.TorusConfig(L=4.0, N=2**8)
    value = averages.pairing(sets.full(config), P, r)
    reports.append(ProbeReport("full_set_pairing", {"N": config.N, "r": r}, value, threshold=1 - 4 * r,
                               passed=bool(value >= 1 - 4 * r)))

    depth = 4
    full = partition.partition_report(sets.full(config), P, partition.dyadic_partition(depth), c_p=0.01)
    none = partition.partition_report(sets.empty(config), P, partition.dyadic_partition(depth), c_p=0.01)
    ok = full.exceptional_count == 0 and none.exceptional_count == len(none.rows)
    reports.append(ProbeReport("partition_sanity", {"N": config.N, "depth": depth},
                               full.exceptional_count, passed=bool(ok)))
    return reports


def _sup_diff(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _limit_report(name, values, limit, config, seed):
    worst = float(max(values))
    return ProbeReport(name, {"N": config.N, "cases": len(values), "seed": seed}, worst,
                       threshold=limit, passed=bool(worst <= limit))


def _corpus(count, delta_range, seed, config):
    return sets.corpus(count, delta_range=delta_range, seed=seed, config=config)


def _mart_suite(settings, seed, worker_count, count=200):
    config = grid.TorusConfig(N=2**12)
    corpus = _corpus(count, (0.05, 0.5), seed, config)
    return [martingale_corpus(corpus, averages.ScaleGrid.dyadic(3, 8),
                              ratio_min=conf.get_float(settings, "diagnostics", "martingale_min"),
                              worker_count=worker_count)]


def _bil2_suite(settings, seed, worker_count, count=100):
    config = grid.TorusConfig(N=2**12)
    return [maximal_corpus(config, count, averages.ScaleGrid.dyadic(1, 8), seed=seed,
                           ratio_max=conf.get_float(settings, "diagnostics", "ratio_max"),
                           worker_count=worker_count)]


def _decay_suite(settings, seed, worker_count, count=20):
    config = grid.TorusConfig(N=2**16)
    return [decay_corpus(config, count, 3, range(3, 9), seed=seed,
                         normalize=conf.get_bool(settings, "diagnostics", "decay_normalize"),
                         slope_max=conf.get_float(settings, "diagnostics", "decay_slope_max"),
                         worker_count=worker_count)]


def _positivity_suite(settings, seed, worker_count, count=50):
    config = grid.TorusConfig(N=2**14)
    corpus = _corpus(count, (0.2, 0.5), seed, config)
    return [positivity_corpus(corpus, curves.Curve.monomial(2), averages.ScaleGrid.dyadic(3, 8),
                              worker_count=worker_count)]


def _pinned_suite(settings, seed, worker_count, count=20):
    config = grid.TorusConfig(N=2**12)
    corpus = [sets.random_set(0.3, 16, seed=[seed, i], config=config) for i in range(count)]
    T_grid = list(averages.ScaleGrid.dyadic(2, 6))
    return [pinned_corpus(corpus, curves.Curve.monomial(2), T_grid, 2**10, seed=seed,
                          worker_count=worker_count)]


def _partition_suite(settings, seed, worker_count, count=10):
    config = grid.TorusConfig(N=2**12)
    P = curves.Curve.monomial(2)
    c_p = conf.get_float(settings, "partition", "c_p")
    big_c_p = conf.get_float(settings, "partition", "big_c_p")
    samples = conf.get_int(settings, "partition", "samples_per_j")
    depth = 8
    full = partition.partition_report(sets.full(config), P, partition.dyadic_partition(depth), c_p=c_p,
                                      samples_per_j=samples, worker_count=worker_count)
    none = partition.partition_report(sets.empty(config), P, partition.dyadic_partition(depth), c_p=c_p,
                                      samples_per_j=samples, worker_count=worker_count)
    reports = [
        ProbeReport("partition_full", {"depth": depth, "N": config.N}, full.exceptional_count,
                    threshold=0, passed=full.exceptional_count == 0),
        ProbeReport("partition_empty", {"depth": depth, "N": config.N}, none.exceptional_count,
                    threshold=len(none.rows), passed=none.exceptional_count == len(none.rows)),
    ]
    corpus = [sets.random_set(0.3, 16, seed=[seed, i], config=config) for i in range(count)]
    reports.append(partition_corpus(corpus, P, depth, c_p=c_p, samples_per_j=samples, big_c_p=big_c_p,
                                    worker_count=worker_count))
    return reports


def _key_suite(settings, seed, worker_count, count=5):
    config = grid.TorusConfig(N=2**12)
    P = curves.Curve.monomial(2)
    C = conf.get_float(settings, "frequency", "C")
    factor = conf.get_gside_factor(settings, P)
    c0 = conf.get_float(settings, "diagnostics", "key_c0")
    energy_min = conf.get_float(settings, "diagnostics", "key_energy_min")
    scales = averages.ScaleGrid.dyadic(3, 6)
    reports = []
    for A in _corpus(count, (0.2, 0.5), seed, config):
        # Small l, k and C keep the g-side indices representable at this N
        reports.append(high_piece_smallness(A, P, scales, 3, 6, C=1.0, factor=factor))
        reports.append(low_product_identity(A, P, 2.0**-5, 3, 6, C=1.0, factor=factor))
        reports.append(three_term_probe(A, P, scales, c0=c0))
        reports.append(key_dichotomy_probe(A, P, 3, 6, C=C, c0=c0, energy_min=energy_min, factor=factor))
    return reports


SUITE_FUNCS = {
    "core": _core_suite,
    "mart": _mart_suite,
    "bil2": _bil2_suite,
    "decay": _decay_suite,
    "positivity": _positivity_suite,
    "pinned": _pinned_suite,
    "partition": _partition_suite,
    "key": _key_suite,
}


def run_suite(name, settings=None, seed=0, worker_count=1, count=None):
    """
    Run a named probe suite.

    Parameters
    ----------
    name: str
        One of SUITES. "acceptance" runs every suite except "key".
    settings: configparser.ConfigParser, optional
        Thresholds, defaults from conf.DEFAULTS.
    seed: int, default 0
    worker_count: int, default 1
    count: int, optional
        Corpus size override for corpus suites.

    Returns
    -------
    list of ProbeReport
    """
    if name not in SUITES:
        raise errors.ValidationError(f"unknown suite {name!r}, expected one of {SUITES}")
    settings = settings if settings is not None else conf.get_config(None)
    if name == "acceptance":
        names = ["core", "mart", "bil2", "decay", "positivity", "pinned", "partition"]
    else:
        names = [name]
    reports = []
    for n in names:
        kwargs = {} if count is None or n == "core" else {"count": count}
        reports.extend(SUITE_FUNCS[n](settings, seed, worker_count, **kwargs))
    return reports


# Direct O(N^2) oracles

def direct_transform(f):
    """h * sum_x f(x) e(-x xi / L) by explicit summation."""
    N = f.config.N
    n = np.arange(N)
    phases = np.exp(-2j * np.pi * np.outer(n, n) / N)
    return f.config.h * phases @ f.samples


def direct_convolve(f, g):
    N = f.config.N
    out = np.zeros(N, dtype=np.result_type(f.samples, g.samples))
    for i in range(N):
        for j in range(N):
            out[i] += f.samples[j] * g.samples[(i - j) % N]
    return f.config.h * out


def direct_bilinear(f, g, P, r, kernel=None):
    """B_r(f, g) by a loop over x and t with the same nodes and weights."""
    config = f.config
    kernel = kernel if kernel is not None else averages.KernelSpec(averages.SHARP)
    nodes, weights = kernel.nodes(r, config.h)
    N = config.N
    out = np.zeros(N, dtype=np.result_type(f.samples, g.samples))
    for i in range(N):
        for j, w in zip(nodes, weights):
            s = int(round(P(j * config.h) / config.h))
            out[i] += w * f.samples[(i - j) % N] * g.samples[(i - s) % N]
    return out


def direct_inverse(F):
    """(1 / L) * sum_xi F(xi) e(x xi / L) by explicit summation."""
    N = F.config.N
    n = np.arange(N)
    phases = np.exp(2j * np.pi * np.outer(n, n) / N)
    values = phases @ F.samples / F.config.L
    return values.real if F.hermitian else values


def direct_project(f, k):
    multiplier = frequency.ProjectionSpec(k).multiplier(f.config)
    spectrum = grid.GridFunction(f.config, direct_transform(f) * multiplier, form=grid.SPECTRAL,
                                 hermitian=not f.is_complex)
    return direct_inverse(spectrum)


def direct_decompose(f, l_delta, k_delta):
    """Pieces L, M, H from direct projections at the effective indices."""
    low = direct_project(f, l_delta)
    high = f.samples - direct_project(f, k_delta)
    return {"L": low, "M": f.samples - low - high, "H": high}


def direct_hl_maximal(f, radii):
    config = f.config
    N = config.N
    out = np.zeros(N)
    for r in radii:
        m = int(round(r / config.h))
        for i in range(N):
            window = [f.samples[(i + j) % N] for j in range(-m, m + 1)]
            out[i] = max(out[i], sum(window) / (2 * m + 1))
    return out


def direct_pairing(A, P, r, kernel=None):
    a = A.mask
    return float(A.config.h * np.sum(direct_bilinear(a, a, P, r, kernel=kernel)[a.samples > 0]))
