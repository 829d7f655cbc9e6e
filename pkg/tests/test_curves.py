import json
import numpy as np
import numpy.testing as npt
import pytest
import rothpy as rp
from rothpy.curves import Curve


class TestParse:
    def test_default(self):
        assert rp.curves.parse_curve(None) == Curve.monomial(2)

    def test_inline(self):
        P = rp.curves.parse_curve('{"family": "monomial", "d": 3}')
        assert P == Curve.monomial(3)
        assert P.scale_exponent == 3.0

    def test_file(self, tmp_path):
        path = tmp_path / "curve.json"
        path.write_text(json.dumps({"family": "powerlog", "alpha": 1.5, "beta": 1.0}))
        P = rp.curves.parse_curve(str(path))
        assert P == Curve.powerlog(1.5, 1.0)

    def test_bad_json(self):
        with pytest.raises(rp.errors.ValidationError):
            rp.curves.parse_curve("{nope")

    def test_invalid_curve(self):
        with pytest.raises(rp.errors.ValidationError) as e:
            rp.curves.parse_curve('{"family": "monomial", "d": 1}')
        assert e.value.offenders == ["degree must be >= 2"]

    def test_dict_roundtrip(self):
        P = Curve.poly({2: 1.0, 3: -0.5})
        assert Curve.from_dict(json.loads(P.to_json())) == P


class TestValidate:
    def test_valid(self):
        assert rp.curves.validate(Curve.monomial(2)) == []
        assert rp.curves.validate(Curve.poly({2: 1.0, 5: 2.0})) == []
        assert rp.curves.validate(Curve.powerlog(0.5, -1.0)) == []

    def test_linear_term(self):
        assert "nonzero linear coefficient" in rp.curves.validate(Curve.poly({1: 1.0, 2: 1.0}))

    def test_constant_term(self):
        assert "nonzero constant coefficient" in rp.curves.validate(Curve.poly({0: 1.0, 2: 1.0}))

    def test_flat_poly(self):
        assert "no nonzero coefficient of degree >= 2" in rp.curves.validate(Curve.poly({2: 0.0}))

    @pytest.mark.parametrize("alpha", [0.0, 1.0])
    def test_excluded_alpha(self, alpha):
        assert rp.curves.validate(Curve.powerlog(alpha)) == ["α ∈ {0,1} excluded"]

    def test_non_integer_degree(self):
        assert rp.curves.validate(Curve.monomial(2.5)) == ["degree must be an integer"]

    def test_unknown_family(self):
        assert rp.curves.validate(Curve("spiral")) == ["unknown family 'spiral'"]


class TestEvaluate:
    def test_monomial(self):
        t = np.array([0.25, 0.5, 1.0])
        npt.assert_allclose(Curve.monomial(3)(t), t**3)

    def test_scalar(self):
        value = Curve.monomial(2)(0.5)
        assert isinstance(value, float)
        assert value == 0.25

    def test_poly(self):
        t = np.linspace(0.1, 1.0, 10)
        npt.assert_allclose(Curve.poly({2: 1.0, 3: 1.0})(t), t**2 + t**3)

    def test_powerlog(self):
        t = np.linspace(0.1, 0.9, 9)
        npt.assert_allclose(Curve.powerlog(1.5, 2.0)(t), t**1.5 * np.log(t)**2)

    def test_domain(self):
        with pytest.raises(rp.errors.DomainError):
            Curve.monomial(2)(np.array([0.5, 0.0]))

    def test_scale_exponent(self):
        assert Curve.poly({2: 0.0, 3: 1.0}).scale_exponent == 3.0
        assert Curve.powerlog(1.5).scale_exponent == 1.5
