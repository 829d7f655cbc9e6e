import json
import numpy as np
import pandas as pd
import pytest
import rothpy as rp
from rothpy import conf
from rothpy import fileio
from rothpy import sets


class TestSets:
    def test_roundtrip(self, tmp_path, small):
        A = sets.random_set(0.3, 5, seed=1, config=small)
        path = str(tmp_path / "set.json")
        fileio.write_set(A, path, header={"seed": 1})
        B = fileio.read_set(path, config=small)
        assert B == A
        assert B.label == A.label
        assert json.loads(open(path).read())["config"] == {"seed": 1}

    def test_gz_deterministic(self, tmp_path):
        A = sets.random_set(0.3, 5, seed=1)
        paths = [str(tmp_path / "a.json.gz"), str(tmp_path / "b.json.gz")]
        for path in paths:
            fileio.write_set(A, path)
        assert open(paths[0], "rb").read() == open(paths[1], "rb").read()
        assert fileio.read_set(paths[0]) == A

    def test_missing(self, tmp_path):
        with pytest.raises(rp.errors.FileError):
            fileio.read_set(str(tmp_path / "nope.json"))

    def test_not_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{intervals")
        with pytest.raises(rp.errors.FileError):
            fileio.read_set(str(path))

    def test_invalid_intervals(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"intervals": [[0.5, 1.5]]}))
        with pytest.raises(rp.errors.ValidationError) as e:
            fileio.read_set(str(path))
        assert "[0.5, 1.5] outside [0, 1]" in str(e.value)


class TestPartition:
    def test_list(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps([[0.5, 1.0], [0.2, 0.5]]))
        P = fileio.read_partition(str(path))
        assert P.intervals == ((0.5, 1.0), (0.2, 0.5))

    def test_doc(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(rp.partition.dyadic_partition(3).to_dict()))
        assert len(fileio.read_partition(str(path))) == 3

    def test_no_list(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"depth": 3}))
        with pytest.raises(rp.errors.FileError):
            fileio.read_partition(str(path))

    def test_inadmissible(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps([[0.3, 0.4], [0.4, 1.0]]))
        with pytest.raises(rp.errors.ValidationError):
            fileio.read_partition(str(path))


class TestTables:
    @pytest.mark.parametrize("name", ["t.csv", "t.csv.gz"])
    def test_roundtrip(self, tmp_path, name):
        df = pd.DataFrame({"r": [0.5, 0.25], "value": [0.1, 0.2]})
        path = str(tmp_path / name)
        fileio.write_table(df, path, header={"command": "pair"})
        header, got = fileio.read_table(path)
        assert header == {"command": "pair"}
        pd.testing.assert_frame_equal(got, df)

    def test_no_header(self, tmp_path):
        df = pd.DataFrame({"a": [1, 2]})
        path = str(tmp_path / "t.csv")
        fileio.write_table(df, path)
        header, got = fileio.read_table(path)
        assert header is None
        pd.testing.assert_frame_equal(got, df)

    def test_format(self):
        text = fileio.format_table(pd.DataFrame({"a": [1]}), header={"x": 1})
        assert text == '# {"x": 1}\na\n1\n'


class TestGrid:
    def test_real(self, tmp_path, small):
        f = rp.grid.indicator(small, 0.25, 0.75)
        path = str(tmp_path / "f.json")
        fileio.write_grid(f, path)
        g = fileio.read_grid(path)
        assert g.config == small
        np.testing.assert_array_equal(g.samples, f.samples)

    def test_spectral(self, tmp_path, small):
        F = rp.grid.transform(rp.grid.indicator(small, 0.25, 0.75))
        path = str(tmp_path / "F.json.gz")
        fileio.write_grid(F, path)
        G = fileio.read_grid(path)
        assert G.form == rp.grid.SPECTRAL
        assert G.hermitian
        np.testing.assert_array_equal(G.samples, F.samples)


def test_plot_data(tmp_path):
    path = str(tmp_path / "plot.txt")
    fileio.write_plot_data([0.5, 0.25], [1.0 / 3, 2.0], path, header={"command": "pair"})
    text = open(path).read()
    assert text.startswith("# ")
    np.testing.assert_array_equal(np.loadtxt(path), [[0.5, 1.0 / 3], [0.25, 2.0]])


def test_json(tmp_path):
    path = str(tmp_path / "doc.json")
    fileio.write_json({"b": 1, "a": [1, 2]}, path, header={"seed": 0})
    text = open(path).read()
    assert text == fileio.dumps({"a": [1, 2], "b": 1, "config": {"seed": 0}})
    assert text.endswith("\n")


def test_dumps_non_finite():
    doc = {"slope": float("nan"), "rows": [{"v": np.float64(np.inf)}, {"v": np.int64(3)}], "ok": np.bool_(True)}
    text = fileio.dumps(doc)
    assert "NaN" not in text
    assert "Infinity" not in text
    assert json.loads(text) == {"ok": True, "rows": [{"v": None}, {"v": 3}], "slope": None}


class TestConf:
    def test_defaults(self):
        settings = conf.get_config(None)
        assert conf.get_int(settings, "grid", "N") == 2**16
        assert conf.get_float(settings, "grid", "L") == 4.0
        assert conf.get_bool(settings, "diagnostics", "decay_normalize")
        assert settings.get("kernel", "density") == "sharp"

    def test_missing_file(self, tmp_path):
        settings = conf.get_config(str(tmp_path / "nope"))
        assert conf.get_int(settings, "run", "threads") == 1

    def test_override(self, tmp_path):
        path = tmp_path / "config"
        path.write_text("[grid]\nN = 1024\n\n[partition]\nc_p = 0.5\n")
        settings = conf.get_config(str(path))
        assert conf.get_int(settings, "grid", "N") == 1024
        assert conf.get_float(settings, "partition", "c_p") == 0.5
        assert conf.get_float(settings, "grid", "L") == 4.0

    def test_malformed(self, tmp_path):
        path = tmp_path / "config"
        path.write_text("N = 1024\n")
        with pytest.raises(rp.errors.ConfigurationError):
            conf.get_config(str(path))

    def test_bad_value(self, tmp_path):
        path = tmp_path / "config"
        path.write_text("[grid]\nN = lots\n")
        with pytest.raises(rp.errors.ConfigurationError):
            conf.get_int(conf.get_config(str(path)), "grid", "N")

    def test_gside_factor(self, tmp_path):
        settings = conf.get_config(None)
        assert conf.get_gside_factor(settings, rp.curves.Curve.monomial(3)) == 3.0
        settings.set("frequency", "gside_factor", "1.5")
        assert conf.get_gside_factor(settings, rp.curves.Curve.monomial(3)) == 1.5
        settings.set("frequency", "gside_factor", "two")
        with pytest.raises(rp.errors.ConfigurationError):
            conf.get_gside_factor(settings, rp.curves.Curve.monomial(3))

    def test_save(self, tmp_path):
        settings = conf.get_config(None)
        settings.set("run", "threads", "4")
        path = str(tmp_path / "sub" / "config")
        conf.save_config(settings, path)
        assert conf.as_dict(conf.get_config(path)) == conf.as_dict(settings)


def test_validation_error_message():
    e = rp.errors.ValidationError("invalid", offenders=["a", "b"])
    assert str(e) == "invalid: a; b"
    assert e.offenders == ["a", "b"]
    assert str(rp.errors.ValidationError("plain")) == "plain"
