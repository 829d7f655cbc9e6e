"""
Measurable subsets A of [0, 1] as finite unions of half-open intervals.

The interval list is canonical, so densities are exact. The grid mask 1_A is
derived from it with the rasterization convention x in [a, b) -> 1.
"""
from fractions import Fraction
import numpy as np
from . import curves
from . import errors
from . import grid


RANDOM = "random"
PERIODIC = "periodic"
CANTOR = "cantor-like"
QUADRATIC = "quadratic-avoiding"
KINDS = (PERIODIC, CANTOR, QUADRATIC)


class DensitySet:
    """
    A subset of [0, 1] given by disjoint sorted intervals [a, b).

    Use from_intervals() to build one from arbitrary input. The mask is
    computed lazily for the set's TorusConfig and cached.
    """

    def __init__(self, intervals, config=None, label=""):
        self.intervals = tuple((float(a), float(b)) for a, b in intervals)
        self.config = config if config is not None else grid.TorusConfig()
        self.label = label
        self._mask = None
        self._lefts = np.array([a for a, _ in self.intervals], dtype=float)
        self._rights = np.array([b for _, b in self.intervals], dtype=float)

    @property
    def measure(self):
        """Exact Lebesgue measure as a Fraction of the stored floats."""
        return sum((Fraction(b) - Fraction(a) for a, b in self.intervals), Fraction(0))

    @property
    def density(self):
        """delta = |A|"""
        return float(self.measure)

    @property
    def is_empty(self):
        return len(self.intervals) == 0

    @property
    def mask(self):
        """Rasterized indicator 1_A on the ambient torus."""
        if self._mask is None:
            self._mask = grid.GridFunction(self.config, self.contains(self.config.x).astype(float))
        return self._mask

    def contains(self, x):
        """Exact membership of points x in A, scalar or array."""
        x = np.asarray(x, dtype=float)
        if self.is_empty:
            return np.zeros(x.shape, dtype=bool)
        idx = np.searchsorted(self._lefts, x, side="right") - 1
        safe = np.clip(idx, 0, len(self.intervals) - 1)
        return (idx >= 0) & (x < self._rights[safe])

    def sample(self, count, rng):
        """count points drawn uniformly from A."""
        if self.is_empty:
            return np.zeros(0)
        lengths = self._rights - self._lefts
        which = rng.choice(len(lengths), size=count, p=lengths / lengths.sum())
        points = self._lefts[which] + lengths[which] * rng.random(count)
        return np.minimum(points, np.nextafter(self._rights[which], self._lefts[which]))

    def with_config(self, config):
        """Same set on a different grid."""
        return DensitySet(self.intervals, config=config, label=self.label)

    def to_dict(self):
        return {"intervals": [[a, b] for a, b in self.intervals], "label": self.label}

    @classmethod
    def from_dict(cls, doc, config=None, strict=False):
        try:
            intervals = doc["intervals"]
            label = doc.get("label", "")
        except (KeyError, TypeError, AttributeError) as e:
            raise errors.ValidationError(f"Could not parse set JSON: {e}")
        return from_intervals(intervals, config=config, strict=strict, label=label)

    def __eq__(self, other):
        return isinstance(other, DensitySet) and self.intervals == other.intervals

    def __repr__(self):
        return f"DensitySet({len(self.intervals)} intervals, delta={self.density:.6g}, label={self.label!r})"


def from_intervals(intervals, config=None, strict=False, label=""):
    """
    Normalized DensitySet from a list of [a, b] pairs inside [0, 1].

    Overlapping and touching intervals are merged unless strict is True, in
    which case overlaps raise a ValidationError listing them. Empty
    intervals (a == b) are dropped.
    """
    offenders = []
    pairs = []
    for item in intervals:
        try:
            a, b = (float(v) for v in item)
        except (TypeError, ValueError):
            offenders.append(f"malformed interval {item!r}")
            continue
        if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
            offenders.append(f"[{a}, {b}] outside [0, 1]")
        elif a > b:
            offenders.append(f"[{a}, {b}] has a > b")
        elif a < b:
            pairs.append((a, b))
    if offenders:
        raise errors.ValidationError("invalid intervals", offenders=offenders)

    pairs.sort()
    if strict:
        overlaps = [
            f"[{a0}, {b0}] overlaps [{a1}, {b1}]"
            for (a0, b0), (a1, b1) in zip(pairs, pairs[1:]) if a1 < b0
        ]
        if overlaps:
            raise errors.ValidationError("overlapping intervals", offenders=overlaps)

    merged = []
    for a, b in pairs:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return DensitySet(merged, config=config, label=label)


def empty(config=None):
    return DensitySet([], config=config, label="empty")


def full(config=None):
    return DensitySet([(0.0, 1.0)], config=config, label="full")


def complement(A):
    """B = [0, 1] \\ A. Masks of A and B sum to the mask of [0, 1)."""
    gaps = []
    pos = 0.0
    for a, b in A.intervals:
        if a > pos:
            gaps.append((pos, a))
        pos = b
    if pos < 1.0:
        gaps.append((pos, 1.0))
    return DensitySet(gaps, config=A.config, label=f"complement({A.label})")


def random_set(delta, pieces, seed=None, config=None, min_spacing=1e-6):
    """
    Union of pieces disjoint intervals of total length delta.

    Piece lengths and gaps are drawn from flat Dirichlet distributions, so
    placement is uniform. Every piece is at least min_spacing long and
    neighboring pieces are at least min_spacing apart. Deterministic for a
    given seed.
    """
    if not 0 < delta <= 1:
        raise errors.ValidationError(f"delta must be in (0, 1], got {delta}")
    if pieces < 1:
        raise errors.ValidationError(f"pieces must be >= 1, got {pieces}")
    label = f"random(delta={delta}, pieces={pieces}, seed={seed})"
    if delta == 1:
        return DensitySet([(0.0, 1.0)], config=config, label=label)
    if pieces * min_spacing > delta or (pieces - 1) * min_spacing > 1 - delta:
        raise errors.ValidationError(
            f"infeasible: {pieces} pieces with spacing {min_spacing} do not fit delta={delta}"
        )

    rng = np.random.default_rng(seed)
    lengths = min_spacing + (delta - pieces * min_spacing) * rng.dirichlet(np.ones(pieces))
    slack = 1 - delta - (pieces - 1) * min_spacing
    gaps = slack * rng.dirichlet(np.ones(pieces + 1))
    gaps[1:-1] += min_spacing

    intervals = []
    pos = gaps[0]
    for i in range(pieces):
        a = pos
        b = min(a + lengths[i], 1.0)
        intervals.append((a, b))
        pos = b + gaps[i + 1]
    return DensitySet(intervals, config=config, label=label)


def structured_set(kind, delta, config=None, **params):
    """
    Deterministic structured set of density delta.

    Kinds and parameters:

    periodic: period (default 2^-4, 1/period an integer)
        Intervals [j p, j p + delta p).
    cantor-like: depth (default 0), ratio (default max(1/3, delta^(1/depth) / 2))
        The 2^depth left-aligned pieces of length delta / 2^depth inside the
        level-depth intervals of a Cantor construction keeping two end pieces
        of relative length ratio at each level.
    quadratic-avoiding: pieces (default 32), seed, curve (default t^2)
        Greedy choice of pieces cells of width delta / pieces, skipping cells
        that would complete a pattern {x, x - t, x - P(t)} among chosen cell
        centers. Cells that cannot be placed greedily are filled in seeded
        random order.
    """
    if not 0 < delta <= 1:
        raise errors.ValidationError(f"delta must be in (0, 1], got {delta}")
    if kind == PERIODIC:
        return _periodic(delta, config, **params)
    if kind == CANTOR:
        return _cantor(delta, config, **params)
    if kind == QUADRATIC:
        return _quadratic_avoiding(delta, config, **params)
    raise errors.ValidationError(f"unknown structured set kind {kind!r}, expected one of {KINDS}")


def _periodic(delta, config, period=2**-4):
    count = int(round(1.0 / period))
    if period <= 0 or abs(count * period - 1.0) > 1e-12:
        raise errors.ValidationError(f"1/period must be an integer, got period={period}")
    width = delta * period
    intervals = [(j * period, min(j * period + width, 1.0)) for j in range(count)]
    return from_intervals(intervals, config=config, label=f"periodic(delta={delta}, period={period})")


def _cantor(delta, config, depth=0, ratio=None):
    depth = int(depth)
    if depth < 0:
        raise errors.ValidationError(f"depth must be >= 0, got {depth}")
    label = f"cantor-like(delta={delta}, depth={depth})"
    if depth == 0:
        return from_intervals([(0.0, delta)], config=config, label=label)
    if ratio is None:
        ratio = max(1.0 / 3.0, delta**(1.0 / depth) / 2.0)
    if not 0 < ratio <= 0.5:
        raise errors.ValidationError(f"ratio must be in (0, 1/2], got {ratio}")
    if delta > (2 * ratio)**depth * (1 + 1e-12):
        raise errors.ValidationError(f"delta={delta} exceeds (2*ratio)^depth={(2 * ratio)**depth}")
    lefts = [0.0]
    length = 1.0
    for _ in range(depth):
        lefts = [x for a in lefts for x in (a, a + length * (1 - ratio))]
        length *= ratio
    piece = min(delta / 2**depth, length)
    return from_intervals([(a, min(a + piece, 1.0)) for a in lefts], config=config, label=label)


def _quadratic_avoiding(delta, config, pieces=32, seed=None, curve=None):
    P = curve if curve is not None else curves.Curve.monomial(2)
    pieces = int(pieces)
    if pieces < 1:
        raise errors.ValidationError(f"pieces must be >= 1, got {pieces}")
    width = delta / pieces
    ncells = int(np.floor(1.0 / width + 1e-9))
    if ncells < pieces:
        raise errors.ValidationError(f"infeasible: {pieces} cells of width {width} do not fit in [0, 1]")
    centers = (np.arange(ncells) + 0.5) * width

    def cell_of(z):
        i = int(np.floor(z / width))
        return i if 0 <= i < ncells else -1

    def completes_pattern(c, chosen):
        cells = chosen | {c}
        xc = centers[c]
        for other in chosen:
            xo = centers[other]
            if xo < xc:
                # c plays x, other plays x - t
                if cell_of(xc - P(xc - xo)) in cells:
                    return True
            elif xo > xc:
                # c plays x - t, other plays x
                if cell_of(xo - P(xo - xc)) in cells:
                    return True
        for x in chosen:
            for y in chosen:
                if centers[y] < centers[x] and cell_of(centers[x] - P(centers[x] - centers[y])) == c:
                    return True
        return False

    rng = np.random.default_rng(seed)
    order = [int(c) for c in rng.permutation(ncells)]
    chosen = set()
    for c in order:
        if len(chosen) == pieces:
            break
        if not completes_pattern(c, chosen):
            chosen.add(c)
    for c in order:
        if len(chosen) == pieces:
            break
        chosen.add(c)
    intervals = [(c * width, min((c + 1) * width, 1.0)) for c in sorted(chosen)]
    return from_intervals(intervals, config=config,
                          label=f"quadratic-avoiding(delta={delta}, pieces={pieces}, seed={seed})")


def corpus(count, delta_range=(0.05, 0.5), seed=0, config=None, kinds=(RANDOM,) + KINDS):
    """
    Deterministic mixed corpus of random and structured sets.

    Densities are uniform in delta_range; kinds cycle in the given order.
    """
    lo, hi = delta_range
    if not 0 < lo <= hi <= 1:
        raise errors.ValidationError(f"invalid delta range {delta_range}")
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        delta = float(rng.uniform(lo, hi))
        kind = kinds[i % len(kinds)]
        subseed = int(rng.integers(0, 2**31 - 1))
        if kind == RANDOM:
            A = random_set(delta, int(rng.integers(4, 33)), seed=subseed, config=config)
        elif kind == PERIODIC:
            A = structured_set(PERIODIC, delta, config=config, period=2.0**-int(rng.integers(2, 6)))
        elif kind == CANTOR:
            A = structured_set(CANTOR, delta, config=config, depth=int(rng.integers(1, 5)))
        elif kind == QUADRATIC:
            A = structured_set(QUADRATIC, delta, config=config, pieces=16, seed=subseed)
        else:
            raise errors.ValidationError(f"unknown corpus kind {kind!r}")
        out.append(A)
    return out
