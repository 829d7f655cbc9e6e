import gzip
import json
import numpy as np
import pytest
import rothpy as rp
from rothpy.cli.cli import main


@pytest.fixture()
def run(tmp_path, capsys):
    """Invoke the CLI with an isolated config file, return (code, stdout, stderr)."""
    def _run(*args, config_text=None):
        config_path = tmp_path / "config"
        if config_text is not None:
            config_path.write_text(config_text)
        code = main(["--config", str(config_path)] + [str(a) for a in args])
        out, err = capsys.readouterr()
        return code, out, err
    return _run


@pytest.fixture()
def full_set(tmp_path):
    path = tmp_path / "full.json"
    path.write_text(json.dumps({"intervals": [[0.0, 1.0]], "label": "full"}))
    return str(path)


@pytest.fixture()
def random_set(tmp_path, run):
    path = str(tmp_path / "set.json")
    code, _, _ = run("--N", 1024, "--seed", 7, "-o", path, "gen-set", "--delta", 0.3, "--pieces", 8)
    assert code == 0
    return path


def test_version(run):
    code, out, _ = run("version")
    assert code == 0
    assert out.strip() == rp.__version__


class TestUsage:
    def test_unknown_command(self, run):
        code, _, err = run("frobnicate")
        assert code == 1
        assert "No such command" in err

    def test_bad_n(self, run):
        code, _, err = run("--N", 100, "version")
        assert code == 1
        assert "power of two" in err

    def test_r_and_dyadic(self, run):
        code, _, err = run("--N", 1024, "pair", "--r", 0.25, "--dyadic", 2, 4)
        assert code == 1
        assert "not both" in err

    def test_unresolvable_scale(self, run):
        code, _, err = run("--N", 1024, "pair", "--r", 2**-8)
        assert code == 1
        assert "below" in err

    def test_bad_config(self, run):
        code, _, err = run("version", config_text="N = 3\n")
        assert code == 1
        assert "Could not parse config file" in err

    def test_bad_curve(self, run):
        code, _, _ = run("--curve", '{"family": "spiral"}', "version")
        assert code == 1


class TestGenSet:
    def test_deterministic(self, run):
        args = ("--N", 1024, "--seed", 7, "gen-set", "--delta", 0.3)
        first = run(*args)
        second = run(*args)
        assert first[0] == 0
        assert first[1] == second[1]
        doc = json.loads(first[1])
        assert len(doc["intervals"]) == 16
        assert doc["config"]["seed"] == 7
        assert sum(b - a for a, b in doc["intervals"]) == pytest.approx(0.3)

    def test_seed_override(self, run):
        _, global_seed, _ = run("--N", 1024, "--seed", 7, "gen-set", "--delta", 0.3)
        _, local_seed, _ = run("--N", 1024, "gen-set", "--delta", 0.3, "--seed", 7)
        assert global_seed == local_seed

    def test_csv(self, run):
        code, out, _ = run("--N", 1024, "--format", "csv", "gen-set", "--delta", 0.5, "--kind", "periodic")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("# {")
        assert lines[1] == "a,b"
        assert len(lines) == 2 + 16

    def test_kind_options(self, run):
        code, _, err = run("gen-set", "--delta", 0.5, "--kind", "periodic", "--pieces", 3)
        assert code == 1
        assert "--pieces not valid with --kind periodic" in err

    def test_gz_out(self, run, tmp_path):
        path = str(tmp_path / "set.json.gz")
        code, out, _ = run("--N", 1024, "-o", path, "gen-set", "--delta", 0.3)
        assert code == 0
        assert out == ""
        with gzip.open(path, "rt") as fh:
            assert len(json.load(fh)["intervals"]) == 16


class TestPair:
    def test_full_set(self, run):
        code, out, _ = run("--N", 1024, "pair", "--r", 0.25, "--r", 0.125)
        assert code == 0
        doc = json.loads(out)
        h = 4.0 / 1024
        values = {row["r"]: row["value"] for row in doc["rows"]}
        assert values[0.25] == pytest.approx(1 - 0.25 / 2 - h / 2)
        assert values[0.125] == pytest.approx(1 - 0.125 / 2 - h / 2)
        assert doc["density"] == 1.0
        assert doc["config"]["grid"] == {"L": 4.0, "N": 1024}
        assert doc["config"]["kernel"] == {"kind": "sharp", "support": "unit"}

    def test_csv(self, run, random_set):
        code, out, _ = run("--N", 1024, "--format", "csv", "pair", "--set", random_set, "--dyadic", 2, 4)
        assert code == 0
        lines = out.splitlines()
        header = json.loads(lines[0][2:])
        assert header["command"] == "pair"
        assert lines[1] == "r,value"
        assert len(lines) == 5

    def test_mode(self, run, random_set):
        code, out, _ = run("--N", 1024, "pair", "--set", random_set, "--dyadic", 2, 4, "--mode", "inf")
        assert code == 0
        doc = json.loads(out)
        assert doc["extremal"]["mode"] == "inf"
        assert doc["extremal"]["value"] <= min(row["value"] for row in doc["rows"]) + 1e-12

    def test_plot_data(self, run, tmp_path):
        path = str(tmp_path / "plot.txt")
        code, _, _ = run("--N", 1024, "--plot-data", path, "pair", "--dyadic", 2, 4)
        assert code == 0
        data = np.loadtxt(path)
        assert data.shape == (3, 2)
        np.testing.assert_array_equal(data[:, 0], [0.25, 0.125, 0.0625])

    def test_verbose(self, run):
        code, _, err = run("--N", 1024, "-v", "pair", "--r", 0.25)
        assert code == 0
        assert err.startswith("Run parameters and information:")


def test_scan_pinned(run, full_set):
    code, out, _ = run("--N", 1024, "scan-pinned", "--set", full_set, "--T", 0.25, "--T", 0.125,
                       "--pins", 64, "--baseline", 8)
    assert code == 0
    doc = json.loads(out)
    assert doc["x"] == 1.0
    assert doc["value"] == 1.0
    assert doc["baseline_pins"] == 8
    assert [row["T"] for row in doc["rows"]] == [0.25, 0.125]


def test_decompose(run, random_set, tmp_path):
    pieces = tmp_path / "pieces"
    code, out, _ = run("--N", 1024, "decompose", "--set", random_set, "--l", 2, "--k", 4, "--C", 1,
                       "--pieces-dir", str(pieces))
    assert code == 0
    doc = json.loads(out)
    assert [row["piece"] for row in doc["rows"]] == ["L", "M", "H"]
    assert doc["decomposition"]["C"] == 1.0
    f = rp.fileio.read_set(random_set, config=rp.grid.TorusConfig(N=1024)).mask
    total = sum(rp.fileio.read_grid(str(pieces / f"{name}.json")) for name in "LMH")
    np.testing.assert_allclose(total.samples, f.samples, atol=1e-12)


def test_decompose_needs_input(run):
    code, _, err = run("--N", 1024, "decompose", "--l", 2, "--k", 4)
    assert code == 1
    assert "exactly one of --set or --grid" in err


class TestPartitionReport:
    def test_full(self, run):
        code, out, _ = run("--N", 1024, "partition-report", "--depth", 4)
        assert code == 0
        doc = json.loads(out)
        assert doc["good_count"] == 4
        assert doc["exceptional_count"] == 0
        assert doc["within_bound"]

    def test_csv(self, run, random_set):
        code, out, _ = run("--N", 1024, "--format", "csv", "partition-report", "--set", random_set,
                           "--depth", 4)
        assert code == 0
        lines = out.splitlines()
        assert lines[1] == "lo,hi,witness,samples,v,good"
        assert len(lines) == 6

    def test_partition_file(self, run, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps([[0.5, 1.0], [0.2, 0.5]]))
        code, out, _ = run("--N", 1024, "partition-report", "--partition", str(path))
        assert code == 0
        assert len(json.loads(out)["rows"]) == 2

    def test_inadmissible(self, run, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps([[0.3, 0.4], [0.4, 1.0]]))
        code, _, err = run("--N", 1024, "partition-report", "--partition", str(path))
        assert code == 1
        assert "no dyadic rational" in err


class TestSearch:
    config_text = "[search]\nscale_hi = 5\n"

    def test_best(self, run, tmp_path):
        best = str(tmp_path / "best.json")
        code, out, _ = run("--N", 1024, "search", "--delta", 0.3, "--pieces", 4, "--steps", 5,
                           "--best", best, config_text=self.config_text)
        assert code == 0
        doc = json.loads(out)
        assert len(doc["rows"]) == 6
        assert doc["value"] <= doc["initial_value"]
        A = rp.fileio.read_set(best)
        assert A.density == pytest.approx(0.3, abs=1e-9)

    def test_deterministic(self, run):
        args = ("--N", 1024, "--seed", 3, "search", "--delta", 0.3, "--pieces", 4, "--steps", 5)
        assert run(*args, config_text=self.config_text)[1] == run(*args, config_text=self.config_text)[1]

    def test_calibrate(self, run):
        code, out, _ = run("--N", 1024, "search", "--calibrate", 0.2, "--calibrate", 0.4, "--repeats", 1,
                           "--steps", 2, config_text=self.config_text)
        assert code == 0
        doc = json.loads(out)
        assert [row["delta"] for row in doc["rows"]] == [0.2, 0.4]
        assert "slope" in doc
        assert doc["slope_max"] == 4.0
        assert doc["passed"] is (doc["slope"] is not None and doc["slope"] <= 4.0)

    def test_calibrate_single_delta(self, run):
        code, out, err = run("--N", 1024, "search", "--calibrate", 0.2, "--repeats", 1, "--steps", 2,
                             config_text=self.config_text + "calibration_slope_max = 2\n")
        assert code == 0
        doc = json.loads(out)
        assert doc["slope"] is None
        assert doc["slope_max"] == 2.0
        assert doc["passed"] is False
        assert "Calibration slope nan, max 2: failed" in err

    def test_needs_delta(self, run):
        code, _, _ = run("--N", 1024, "search", config_text=self.config_text)
        assert code == 1


def test_probe_decay(run):
    code, out, _ = run("--N", 4096, "--format", "csv", "probe-decay", "--m-lo", 3, "--m-hi", 6)
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "m,f_index,g_index,value,normalized,included"
    assert len(lines) == 6


def test_probe_decay_span(run):
    code, _, _ = run("--N", 4096, "probe-decay", "--m-lo", 3, "--m-hi", 5)
    assert code == 1


class TestVerify:
    def test_core(self, run):
        code, out, _ = run("verify", "--suite", "core")
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"]

    def test_failure(self, run, monkeypatch):
        failing = rp.diagnostics.ProbeReport("always_fails", {}, 1.0, threshold=0.0, passed=False)
        monkeypatch.setattr(rp.diagnostics, "run_suite", lambda *args, **kwargs: [failing])
        code, out, _ = run("--format", "csv", "verify")
        assert code == 2
        lines = out.splitlines()
        assert lines[1] == "name,statistic,baseline,threshold,passed"
        assert lines[2] == "always_fails,1.0,,0.0,False"
