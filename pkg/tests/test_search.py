import math
import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings, strategies as st
import rothpy as rp
from rothpy import search
from rothpy import sets


@pytest.fixture()
def cfg(small):
    return search.SearchConfig(0.25, pieces=4, steps=20, seed=3, config=small,
                               scales=rp.averages.ScaleGrid.dyadic(2, 4))


def _check_state(state, delta, spacing):
    assert sum(length for _, length in state) == pytest.approx(delta, abs=1e-9)
    for a, length in state:
        assert a >= -1e-12
        assert length > 0
    ends = [a + length for a, length in state]
    assert ends[-1] <= 1 + 1e-12
    for end, (a, _) in zip(ends, state[1:]):
        assert a >= end - 1e-12


class TestSearchConfig:
    def test_defaults(self):
        cfg = search.SearchConfig(0.3)
        assert cfg.pieces == 16
        assert list(cfg.scales) == rp.util.dyadic_scales(3, 10)
        assert cfg.moves == search.MOVES

    @pytest.mark.parametrize("changes", [
        {"delta": 0},
        {"delta": 1.5},
        {"pieces": 0},
        {"steps": -1},
        {"t0": 0},
        {"cooling": 1.0},
        {"moves": ("teleport",)},
        {"moves": ()},
    ])
    def test_invalid(self, cfg, changes):
        with pytest.raises(rp.errors.ValidationError):
            cfg.replace(**changes)

    def test_unresolvable_scales(self, small):
        with pytest.raises(rp.errors.ResolutionError):
            search.SearchConfig(0.3, config=small)

    def test_temperature(self, cfg):
        cfg = cfg.replace(t0=1e-3, cooling=0.5)
        assert cfg.temperature(0) == 1e-3
        assert cfg.temperature(1) == 5e-4
        temps = [cfg.temperature(s) for s in range(10)]
        assert all(b < a for a, b in zip(temps, temps[1:]))

    def test_to_dict(self, cfg):
        doc = cfg.to_dict()
        assert doc["delta"] == 0.25
        assert doc["scales"] == [0.25, 0.125, 0.0625]
        assert doc["grid"] == {"L": 4.0, "N": 2**8}


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**16),
    pieces=st.integers(min_value=1, max_value=8),
    delta=st.floats(min_value=0.05, max_value=0.8),
)
def test_moves_conserve_length(seed, pieces, delta):
    spacing = 1e-6
    A = sets.random_set(delta, pieces, seed=seed)
    state = [(a, b - a) for a, b in A.intervals]
    rng = np.random.default_rng(seed)
    for _ in range(50):
        move = search.MOVE_FUNCS[search.MOVES[int(rng.integers(3))]]
        proposal = move(state, rng, spacing)
        if proposal is not None:
            state = proposal
            _check_state(state, A.density, spacing)


def test_resize_single_piece():
    rng = np.random.default_rng(0)
    assert search.resize([(0.1, 0.3)], rng, 1e-6) is None


def test_to_set(small):
    A = search.to_set([(0.1, 0.2), (0.5, 0.1)], small)
    assert A.intervals == ((0.1, pytest.approx(0.3)), (0.5, pytest.approx(0.6)))


class TestSearchExtremal:
    def test_trajectory(self, cfg):
        result = search.search_extremal(cfg)
        assert len(result.trajectory) == cfg.steps + 1
        assert list(result.trajectory.columns) == ["step", "objective", "accepted", "best"]
        assert result.trajectory["best"].is_monotonic_decreasing
        assert result.value <= result.initial_value
        assert result.value == result.trajectory["best"].iloc[-1]
        assert result.best.density == pytest.approx(0.25, abs=1e-9)

    def test_best_value(self, cfg):
        result = search.search_extremal(cfg)
        assert search.objective(result.best, cfg) == pytest.approx(result.value)

    def test_deterministic(self, cfg):
        a = search.search_extremal(cfg)
        b = search.search_extremal(cfg)
        assert a.value == b.value
        assert a.best == b.best
        assert a.trajectory.equals(b.trajectory)

    def test_zero_steps(self, cfg):
        result = search.search_extremal(cfg.replace(steps=0))
        assert len(result.trajectory) == 1
        assert result.value == result.initial_value

    def test_baseline(self, cfg):
        result = search.search_extremal(cfg.replace(steps=2), baseline_sets=3)
        assert result.baseline_median is not None
        doc = result.to_dict()
        assert doc["baseline_median"] == result.baseline_median
        assert doc["search"]["seed"] == 3


class TestCalibration:
    def test_table(self, cfg):
        calibration = search.calibration_sweep([0.2, 0.4], 2, cfg.replace(steps=3))
        table = calibration.table
        assert list(table.columns) == ["delta", "objective", "runs"]
        assert list(table["delta"]) == [0.2, 0.4]
        assert list(table["runs"]) == [2, 2]
        assert isinstance(calibration.slope, float)
        assert calibration.slope_max == 4.0

    def test_workers(self, cfg):
        cfg = cfg.replace(steps=3)
        inline = search.calibration_sweep([0.2, 0.4], 2, cfg)
        parallel = search.calibration_sweep([0.2, 0.4], 2, cfg, worker_count=2)
        assert inline.table.equals(parallel.table)

    def test_repeats(self, cfg):
        with pytest.raises(rp.errors.ValidationError):
            search.calibration_sweep([0.2], 0, cfg)


class TestCalibration:
    def table(self, objectives):
        return pd.DataFrame({"delta": [0.1, 0.2, 0.4][:len(objectives)], "objective": objectives, "runs": 1})

    @pytest.mark.parametrize("slope, slope_max, passed", [
        (3.0, 4.0, True),
        (4.0, 4.0, True),
        (4.5, 4.0, False),
        (4.5, 5.0, True),
        (float("nan"), 4.0, False),
    ])
    def test_passed(self, slope, slope_max, passed):
        calibration = search.Calibration(self.table([1e-3, 8e-3, 6.4e-2]), slope, slope_max)
        assert calibration.passed is passed
        assert calibration.to_dict()["passed"] is passed

    def test_single_delta(self, cfg):
        calibration = search.calibration_sweep([0.2], 1, cfg.replace(steps=2))
        assert math.isnan(calibration.slope)
        assert not calibration.passed
        assert calibration.to_dict()["slope"] is None

    def test_threshold(self, cfg):
        cfg = cfg.replace(steps=2)
        loose = search.calibration_sweep([0.2, 0.4], 1, cfg, slope_max=1e6)
        strict = search.calibration_sweep([0.2, 0.4], 1, cfg, slope_max=-1e6)
        assert loose.slope == strict.slope
        assert loose.passed is math.isfinite(loose.slope)
        assert not strict.passed
