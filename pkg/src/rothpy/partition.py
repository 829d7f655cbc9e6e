"""
Admissible partitions of (r_min, 1] and the good/exceptional classification.

An interval J = (lo, hi] is admissible if it contains a dyadic rational
2^-k. Each J is scored by

    v_J = |<1_A, inf_{r in S_J} B_r(1_A, 1_A)>|

over a finite scale sample S_J of J, and is good when v_J > 0 and
v_J >= c_P delta^3.
"""
import math
import numpy as np
import pandas as pd
from . import averages
from . import errors
from . import sweep
from . import util


def dyadic_witness(lo, hi):
    """Largest 2^-k in (lo, hi], k >= 0, or None."""
    if hi <= 0 or hi <= lo:
        return None
    k = max(0, math.ceil(-math.log2(hi) - 1e-12))
    w = 2.0**-k
    while w > hi:
        k += 1
        w = 2.0**-k
    return w if w > lo else None


class AdmissiblePartition:
    """Intervals (lo, hi] ordered from 1 down to r_min, with a dyadic witness each."""

    def __init__(self, intervals):
        intervals = [(float(lo), float(hi)) for lo, hi in intervals]
        violations = validate_partition(intervals)
        if violations:
            raise errors.ValidationError("inadmissible partition", offenders=violations)
        self.intervals = tuple(sorted(intervals, key=lambda J: -J[1]))
        self.witnesses = tuple(dyadic_witness(lo, hi) for lo, hi in self.intervals)

    @property
    def r_min(self):
        return self.intervals[-1][0]

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(zip(self.intervals, self.witnesses))

    def to_dict(self):
        return {
            "intervals": [[lo, hi] for lo, hi in self.intervals],
            "witnesses": list(self.witnesses),
        }


def dyadic_partition(depth):
    """{(2^-(j+1), 2^-j] : 0 <= j < depth}, witness 2^-j."""
    depth = int(depth)
    if depth < 1:
        raise errors.ValidationError(f"depth must be >= 1, got {depth}")
    return AdmissiblePartition([(2.0**-(j + 1), 2.0**-j) for j in range(depth)])


def validate_partition(candidate):
    """
    List of reasons candidate is not an admissible partition of (r_min, 1].

    candidate is an AdmissiblePartition or a list of (lo, hi) pairs.
    """
    if isinstance(candidate, AdmissiblePartition):
        intervals = list(candidate.intervals)
    else:
        intervals = []
        for item in candidate:
            try:
                lo, hi = (float(v) for v in item)
            except (TypeError, ValueError):
                return [f"malformed interval {item!r}"]
            intervals.append((lo, hi))
    if not intervals:
        return ["empty partition"]

    violations = []
    for lo, hi in intervals:
        if not 0 <= lo < hi <= 1:
            violations.append(f"({lo}, {hi}] is not a nonempty interval inside (0, 1]")
        elif dyadic_witness(lo, hi) is None:
            violations.append(f"({lo}, {hi}]: no dyadic rational 2^-k inside")

    ordered = sorted(intervals, key=lambda J: -J[1])
    if ordered[0][1] != 1.0:
        violations.append(f"does not cover up to 1, top endpoint {ordered[0][1]}")
    for (lo0, hi0), (lo1, hi1) in zip(ordered, ordered[1:]):
        if hi1 > lo0:
            violations.append(f"({lo0}, {hi0}] and ({lo1}, {hi1}] not disjoint")
        elif hi1 < lo0:
            violations.append(f"gap ({hi1}, {lo0}] not covered")
    return violations


def scale_sample(lo, hi, witness, samples_per_j):
    """
    Scales sampling J = (lo, hi]: hi, the witness, lo when lo > 0, and
    log-spaced interior points up to samples_per_j in total. Decreasing.
    """
    required = {hi, witness}
    if lo > 0:
        required.add(lo)
    extras = max(0, samples_per_j - len(required))
    if extras and lo > 0:
        required.update(float(r) for r in np.geomspace(lo, hi, extras + 2)[1:-1])
    elif extras:
        required.update(float(r) for r in np.geomspace(hi / 2**(extras + 1), hi, extras + 2)[1:-1])
    return sorted(required, reverse=True)


def exceptional_bound(delta, big_c_p=1.0):
    """C_P delta^-5 log2(1/delta). None for delta = 0."""
    if delta <= 0:
        return None
    return big_c_p * delta**-5 * util.log2_inv(delta)


class PartitionReport:
    """
    Per-J rows and the good/exceptional summary of partition_report().

    rows has columns lo, hi, witness, samples, v, good. dropped lists the
    intervals left out because their witness is below 4h.
    """

    def __init__(self, rows, delta, c_p, big_c_p, samples_per_j, r_min, dropped, notes):
        self.rows = rows
        self.delta = delta
        self.c_p = c_p
        self.big_c_p = big_c_p
        self.samples_per_j = samples_per_j
        self.r_min = r_min
        self.dropped = dropped
        self.notes = notes

    @property
    def threshold(self):
        return self.c_p * self.delta**3

    @property
    def good_count(self):
        return int(self.rows["good"].sum())

    @property
    def exceptional_count(self):
        return len(self.rows) - self.good_count

    @property
    def bound(self):
        return exceptional_bound(self.delta, self.big_c_p)

    @property
    def within_bound(self):
        return self.bound is None or self.exceptional_count <= self.bound

    def to_dict(self):
        return {
            "delta": self.delta,
            "c_p": self.c_p,
            "big_c_p": self.big_c_p,
            "threshold": self.threshold,
            "samples_per_j": self.samples_per_j,
            "r_min": self.r_min,
            "good_count": self.good_count,
            "exceptional_count": self.exceptional_count,
            "bound": self.bound,
            "within_bound": self.within_bound,
            "rows": [
                {"lo": r.lo, "hi": r.hi, "witness": r.witness, "v": r.v, "good": bool(r.good)}
                for r in self.rows.itertuples()
            ],
            "dropped": self.dropped,
            "notes": self.notes,
        }


def _score_interval(task):
    A, P, scales, kernel = task
    return abs(averages.paired_extremal(A, P, scales, mode=averages.INF, kernel=kernel))


def partition_report(A, P, partition, c_p=1e-3, samples_per_j=4, big_c_p=1.0, kernel=None,
                     worker_count=1, every=None):
    """
    Score each J of an admissible partition and classify it.

    Parameters
    ----------
    A: sets.DensitySet
    P: curves.Curve
    partition: AdmissiblePartition or list of (lo, hi)
    c_p: float, default 1e-3
        Good-set threshold constant, J is good iff v_J > 0 and v_J >= c_p delta^3.
    samples_per_j: int, default 4
        Target number of scales sampled in each J, at least 2.
    big_c_p: float, default 1
        Constant of the exceptional count bound.
    kernel: averages.KernelSpec, optional
    worker_count: int, default 1
    every: float, optional
        Progress output resolution in percent.

    Returns
    -------
    PartitionReport
    """
    if not isinstance(partition, AdmissiblePartition):
        partition = AdmissiblePartition(partition)
    if samples_per_j < 2:
        raise errors.ValidationError(f"samples_per_j must be >= 2, got {samples_per_j}")
    config = A.config
    floor = averages.MIN_SAMPLES * config.h
    delta = A.density

    kept = []
    dropped = []
    notes = []
    tasks = []
    for (lo, hi), witness in partition:
        if witness < floor * (1 - 1e-12):
            dropped.append({"lo": lo, "hi": hi, "witness": witness, "reason": f"witness below 4h = {floor}"})
            continue
        sample = scale_sample(lo, hi, witness, samples_per_j)
        resolvable = [r for r in sample if r >= floor * (1 - 1e-12)]
        if len(resolvable) < len(sample):
            notes.append(f"({lo}, {hi}]: {len(sample) - len(resolvable)} scales below 4h dropped")
        kept.append((lo, hi, witness, len(resolvable)))
        tasks.append((A, P, averages.ScaleGrid(resolvable), kernel))
    if dropped:
        notes.append(f"{len(dropped)} intervals dropped below 4h = {floor}")

    values = sweep.run_tasks(_score_interval, tasks, worker_count=worker_count, every=every, label="Intervals")
    threshold = c_p * delta**3
    rows = pd.DataFrame(
        [
            {"lo": lo, "hi": hi, "witness": w, "samples": n, "v": v, "good": bool(v > 0 and v >= threshold)}
            for (lo, hi, w, n), v in zip(kept, values)
        ],
        columns=["lo", "hi", "witness", "samples", "v", "good"],
    )
    r_min = kept[-1][0] if kept else None
    return PartitionReport(rows, delta, c_p, big_c_p, samples_per_j, r_min, dropped, notes)


def global_inf(A, P, scales, kernel=None):
    """min over the scale grid of pairing(A, P, r). Outer inf, unlike v_J."""
    scales = averages.as_scale_grid(scales).check(A.config)
    return float(averages.pairing_profile(A, P, scales, kernel=kernel)["value"].min())
