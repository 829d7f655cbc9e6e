"""
Simulated annealing over interval unions of fixed density.

Sets are kept as (start, length) pieces so every move conserves total
length: translate a piece, move length from one piece to another, split a
piece around a new gap or merge two neighbors. The objective is the inf-mode
paired extremal functional over a fixed scale grid.
"""
import math
import numpy as np
import pandas as pd
from . import averages
from . import curves
from . import errors
from . import grid
from . import sets
from . import sweep
from . import util


TRANSLATE = "translate"
RESIZE = "resize"
SPLIT_MERGE = "split-merge"
MOVES = (TRANSLATE, RESIZE, SPLIT_MERGE)


class SearchConfig:
    """Parameters of one annealing run."""

    def __init__(self, delta, pieces=16, steps=2000, t0=1e-3, cooling=0.995, seed=None,
                 scales=None, curve=None, kernel=None, config=None, min_spacing=1e-6, moves=MOVES):
        self.delta = float(delta)
        self.pieces = int(pieces)
        self.steps = int(steps)
        self.t0 = float(t0)
        self.cooling = float(cooling)
        self.seed = seed
        self.scales = averages.as_scale_grid(scales if scales is not None else averages.ScaleGrid.dyadic(3, 10))
        self.curve = curve if curve is not None else curves.Curve.monomial(2)
        self.kernel = kernel if kernel is not None else averages.KernelSpec(averages.SHARP)
        self.config = config if config is not None else grid.TorusConfig()
        self.min_spacing = float(min_spacing)
        self.moves = tuple(moves)
        self.check()

    def check(self):
        offenders = []
        if not 0 < self.delta <= 1:
            offenders.append(f"delta={self.delta} outside (0, 1]")
        if self.pieces < 1:
            offenders.append(f"pieces={self.pieces} < 1")
        if self.steps < 0:
            offenders.append(f"steps={self.steps} < 0")
        if self.t0 <= 0:
            offenders.append(f"t0={self.t0} <= 0")
        if not 0 < self.cooling < 1:
            offenders.append(f"cooling={self.cooling} outside (0, 1)")
        if self.min_spacing <= 0:
            offenders.append(f"min_spacing={self.min_spacing} <= 0")
        offenders += [f"unknown move {m!r}" for m in self.moves if m not in MOVES]
        if not self.moves:
            offenders.append("no moves")
        if offenders:
            raise errors.ValidationError("invalid search config", offenders=offenders)
        self.scales.check(self.config)

    def temperature(self, step):
        """t0 cooling^step, strictly decreasing."""
        return self.t0 * self.cooling**step

    def replace(self, **changes):
        params = {
            "delta": self.delta, "pieces": self.pieces, "steps": self.steps, "t0": self.t0,
            "cooling": self.cooling, "seed": self.seed, "scales": self.scales, "curve": self.curve,
            "kernel": self.kernel, "config": self.config, "min_spacing": self.min_spacing,
            "moves": self.moves,
        }
        params.update(changes)
        return SearchConfig(**params)

    def to_dict(self):
        return {
            "delta": self.delta,
            "pieces": self.pieces,
            "steps": self.steps,
            "t0": self.t0,
            "cooling": self.cooling,
            "seed": self.seed,
            "scales": list(self.scales),
            "curve": self.curve.to_dict(),
            "kernel": self.kernel.to_dict(),
            "grid": self.config.to_dict(),
            "min_spacing": self.min_spacing,
            "moves": list(self.moves),
        }


def _room(pieces, i, spacing):
    """Free space to the left and right of piece i."""
    a, length = pieces[i]
    if i > 0:
        left = a - (pieces[i - 1][0] + pieces[i - 1][1]) - spacing
    else:
        left = a
    if i < len(pieces) - 1:
        right = pieces[i + 1][0] - (a + length) - spacing
    else:
        right = 1.0 - (a + length)
    return max(left, 0.0), max(right, 0.0)


def translate(pieces, rng, spacing):
    i = int(rng.integers(len(pieces)))
    left, right = _room(pieces, i, spacing)
    if left + right <= 0:
        return None
    a, length = pieces[i]
    out = list(pieces)
    out[i] = (a + rng.uniform(-left, right), length)
    return out


def resize(pieces, rng, spacing):
    """Grow piece i to the right by d and shrink piece j by d."""
    if len(pieces) < 2:
        return None
    i, j = (int(v) for v in rng.choice(len(pieces), size=2, replace=False))
    _, right = _room(pieces, i, spacing)
    dmax = min(right, pieces[j][1] - spacing)
    if dmax <= 0:
        return None
    d = rng.uniform(0, dmax)
    out = list(pieces)
    out[i] = (pieces[i][0], pieces[i][1] + d)
    out[j] = (pieces[j][0], pieces[j][1] - d)
    return out


def split_merge(pieces, rng, spacing):
    if len(pieces) > 1 and rng.random() < 0.5:
        # Merge i and i + 1 by sliding i + 1 left onto i
        i = int(rng.integers(len(pieces) - 1))
        a, length = pieces[i]
        merged = (a, length + pieces[i + 1][1])
        return pieces[:i] + [merged] + pieces[i + 2:]
    # Split i at c, opening a gap g and pushing the right part right by g
    i = int(rng.integers(len(pieces)))
    a, length = pieces[i]
    _, right = _room(pieces, i, spacing)
    if length < 2 * spacing or right <= spacing:
        return None
    cut = rng.uniform(spacing, length - spacing)
    gap = rng.uniform(spacing, right)
    return pieces[:i] + [(a, cut), (a + cut + gap, length - cut)] + pieces[i + 1:]


MOVE_FUNCS = {TRANSLATE: translate, RESIZE: resize, SPLIT_MERGE: split_merge}


def to_set(pieces, config, label=""):
    return sets.DensitySet([(a, min(a + length, 1.0)) for a, length in pieces], config=config, label=label)


def objective(A, cfg):
    return averages.paired_extremal(A, cfg.curve, cfg.scales, mode=averages.INF, kernel=cfg.kernel)


def _subseed(seed, *extra):
    """Deterministic child seed, None stays None."""
    if seed is None:
        return None
    base = [int(s) for s in seed] if isinstance(seed, (list, tuple)) else [int(seed)]
    return base + [int(e) for e in extra]


class SearchResult:
    """
    Outcome of search_extremal().

    trajectory has columns step, objective, accepted, best. Row 0 is the
    initial set.
    """

    def __init__(self, best, value, initial_value, trajectory, cfg, baseline_median=None):
        self.best = best
        self.value = value
        self.initial_value = initial_value
        self.trajectory = trajectory
        self.cfg = cfg
        self.baseline_median = baseline_median

    def to_dict(self):
        return {
            "value": self.value,
            "initial_value": self.initial_value,
            "baseline_median": self.baseline_median,
            "accepted": int(self.trajectory["accepted"].sum()) - 1,
            "best": self.best.to_dict(),
            "search": self.cfg.to_dict(),
        }


def search_extremal(cfg, baseline_sets=0, every=None):
    """
    Anneal from a seeded random set toward a minimal objective.

    Parameters
    ----------
    cfg: SearchConfig
    baseline_sets: int, default 0
        If > 0, the median objective of this many seeded random sets of the
        same density and piece count is reported as baseline_median.
    every: float, optional
        Progress output resolution in percent.

    Returns
    -------
    SearchResult
    """
    initial = sets.random_set(cfg.delta, cfg.pieces, seed=cfg.seed, config=cfg.config,
                              min_spacing=cfg.min_spacing)
    rng = np.random.default_rng(_subseed(cfg.seed, 1))
    state = [(a, b - a) for a, b in initial.intervals]
    value = objective(initial, cfg)
    initial_value = value
    initial_state = state
    best_state, best_value = state, value

    rows = [{"step": 0, "objective": value, "accepted": True, "best": best_value}]
    progress = sweep.Progress(max(cfg.steps, 1), every=every, label="Steps")
    for step in range(1, cfg.steps + 1):
        kind = cfg.moves[int(rng.integers(len(cfg.moves)))]
        proposal = MOVE_FUNCS[kind](state, rng, cfg.min_spacing)
        accepted = False
        if proposal is not None:
            candidate = objective(to_set(proposal, cfg.config), cfg)
            diff = candidate - value
            if diff <= 0 or rng.random() < math.exp(-diff / cfg.temperature(step - 1)):
                state, value = proposal, candidate
                accepted = True
                if value < best_value:
                    best_state, best_value = state, value
        rows.append({"step": step, "objective": value, "accepted": accepted, "best": best_value})
        progress.update()

    if best_state is initial_state:
        best = initial
    else:
        best = to_set(best_state, cfg.config, label=f"search(delta={cfg.delta}, seed={cfg.seed})")
    baseline_median = None
    if baseline_sets > 0:
        values = [
            objective(sets.random_set(cfg.delta, cfg.pieces, seed=_subseed(cfg.seed, 2, i),
                                      config=cfg.config, min_spacing=cfg.min_spacing), cfg)
            for i in range(baseline_sets)
        ]
        baseline_median = float(np.median(values))
    trajectory = pd.DataFrame(rows, columns=["step", "objective", "accepted", "best"])
    return SearchResult(best, best_value, initial_value, trajectory, cfg, baseline_median=baseline_median)


def _best_value(cfg):
    return search_extremal(cfg).value


class Calibration:
    """
    Outcome of calibration_sweep().

    table has columns delta, objective, runs. slope is the least-squares
    slope of log2(objective) against log2(delta) over positive objectives,
    nan with fewer than two of them. passed is slope finite and <= slope_max.
    """

    def __init__(self, table, slope, slope_max):
        self.table = table
        self.slope = slope
        self.slope_max = slope_max

    @property
    def passed(self):
        return bool(math.isfinite(self.slope) and self.slope <= self.slope_max)

    def to_dict(self):
        return {
            "slope": self.slope if math.isfinite(self.slope) else None,
            "slope_max": self.slope_max,
            "passed": self.passed,
        }


def calibration_sweep(deltas, repeats, cfg, slope_max=4.0, worker_count=1, every=None):
    """
    Minimum objective over repeats seeded searches for each delta.

    Run i of density delta uses seed [cfg.seed, i] (or unseeded if cfg.seed
    is None).

    Returns
    -------
    Calibration
    """
    deltas = [float(d) for d in deltas]
    if repeats < 1:
        raise errors.ValidationError(f"repeats must be >= 1, got {repeats}")
    tasks = [
        cfg.replace(delta=d, seed=_subseed(cfg.seed, i))
        for d in deltas for i in range(repeats)
    ]
    values = sweep.run_tasks(_best_value, tasks, worker_count=worker_count, every=every, label="Searches")
    rows = []
    for n, d in enumerate(deltas):
        chunk = values[n * repeats:(n + 1) * repeats]
        rows.append({"delta": d, "objective": float(min(chunk)), "runs": repeats})
    table = pd.DataFrame(rows, columns=["delta", "objective", "runs"])
    positive = table[table["objective"] > 0]
    slope = util.fit_slope(np.log2(positive["delta"]), np.log2(positive["objective"]))
    return Calibration(table, slope, slope_max)
