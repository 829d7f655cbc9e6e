"""
Curves P(t) for the pattern {x, x - t, x - P(t)}.

Only a whitelist of non-flat families is supported:

    monomial  P(t) = t^d, integer d >= 2
    poly      P(t) = sum_j a_j t^j, a_0 = a_1 = 0, at least one a_j != 0
    powerlog  P(t) = t^alpha |log t|^beta, alpha not in {0, 1}

Curves are evaluated on t in (0, 1].
"""
import json
import math
import os
import numpy as np
from . import errors


MONOMIAL = "monomial"
POLY = "poly"
POWERLOG = "powerlog"
FAMILIES = (MONOMIAL, POLY, POWERLOG)


class Curve:
    """
    Descriptor of a curve from the supported families.

    Construction does not validate, use validate() or check().
    """

    def __init__(self, family, d=None, coeffs=None, alpha=None, beta=None):
        self.family = family
        self.d = d
        self.coeffs = dict(coeffs) if coeffs else {}
        self.alpha = alpha
        self.beta = beta

    @classmethod
    def monomial(cls, d=2):
        return cls(MONOMIAL, d=d)

    @classmethod
    def poly(cls, coeffs):
        return cls(POLY, coeffs={int(j): float(a) for j, a in dict(coeffs).items()})

    @classmethod
    def powerlog(cls, alpha, beta=0.0):
        return cls(POWERLOG, alpha=float(alpha), beta=float(beta))

    @property
    def norm(self):
        """l1 sum of coefficients, polynomial families only (None otherwise)."""
        if self.family == MONOMIAL:
            return 1.0
        if self.family == POLY:
            return math.fsum(abs(a) for a in self.coeffs.values())
        return None

    @property
    def scale_exponent(self):
        """
        Exponent e with P(t) ~ t^e near 0.

        Sets the g-side frequency index multiplier in band decompositions,
        2 for t^2.
        """
        if self.family == MONOMIAL:
            return float(self.d)
        if self.family == POLY:
            return float(min(j for j, a in self.coeffs.items() if a != 0))
        return float(self.alpha)

    def check(self):
        """Raise ValidationError if the descriptor is not valid."""
        violations = validate(self)
        if violations:
            raise errors.ValidationError("invalid curve", offenders=violations)
        return self

    def __call__(self, t):
        return evaluate(self, t)

    def to_dict(self):
        if self.family == MONOMIAL:
            return {"family": MONOMIAL, "d": self.d}
        if self.family == POLY:
            return {"family": POLY, "coeffs": {str(j): a for j, a in sorted(self.coeffs.items())}}
        return {"family": POWERLOG, "alpha": self.alpha, "beta": self.beta}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc):
        try:
            family = doc["family"]
            if family == MONOMIAL:
                return cls(MONOMIAL, d=doc["d"])
            if family == POLY:
                return cls(POLY, coeffs={int(j): float(a) for j, a in doc["coeffs"].items()})
            if family == POWERLOG:
                return cls(POWERLOG, alpha=float(doc["alpha"]), beta=float(doc.get("beta", 0.0)))
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise errors.ValidationError(f"Could not parse curve: {e}")
        raise errors.ValidationError(f"unknown curve family {family!r}")

    def __eq__(self, other):
        return isinstance(other, Curve) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"Curve({self.to_json()})"


def parse_curve(text):
    """Curve from inline JSON text or a path to a JSON file."""
    if text is None:
        return Curve.monomial(2)
    text = text.strip()
    if not text.startswith("{") and os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise errors.ValidationError(f"Could not parse curve JSON: {e}")
    return Curve.from_dict(doc).check()


def validate(P):
    """List of violated family invariants. Empty if P is valid."""
    violations = []
    if P.family == MONOMIAL:
        d = P.d
        integral = (isinstance(d, (int, np.integer)) and not isinstance(d, bool)) or (
            isinstance(d, float) and d.is_integer())
        if not integral:
            violations.append("degree must be an integer")
        elif d < 2:
            violations.append("degree must be >= 2")
    elif P.family == POLY:
        if any(j < 0 for j in P.coeffs):
            violations.append("negative exponents excluded")
        if P.coeffs.get(0, 0.0) != 0.0:
            violations.append("nonzero constant coefficient")
        if P.coeffs.get(1, 0.0) != 0.0:
            violations.append("nonzero linear coefficient")
        if not any(a != 0.0 for j, a in P.coeffs.items() if j >= 2):
            violations.append("no nonzero coefficient of degree >= 2")
        if any(not np.isfinite(a) for a in P.coeffs.values()):
            violations.append("non-finite coefficient")
    elif P.family == POWERLOG:
        if P.alpha is None or not np.isfinite(P.alpha):
            violations.append("alpha must be a finite real")
        elif P.alpha in (0.0, 1.0):
            violations.append("α ∈ {0,1} excluded")
        if P.beta is None or not np.isfinite(P.beta):
            violations.append("beta must be a finite real")
    else:
        violations.append(f"unknown family {P.family!r}")
    return violations


def evaluate(P, t):
    """
    P(t) for t in (0, 1], scalar or array.

    Raises DomainError for t <= 0.
    """
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise errors.DomainError("curves are evaluated on t > 0 only")
    if P.family == MONOMIAL:
        value = t**int(P.d)
    elif P.family == POLY:
        # Horner over the dense coefficient vector, highest degree first
        degree = max(P.coeffs)
        dense = [P.coeffs.get(j, 0.0) for j in range(degree, -1, -1)]
        value = np.polyval(dense, t)
    elif P.family == POWERLOG:
        value = t**P.alpha * np.abs(np.log(t))**P.beta
    else:
        raise errors.ValidationError(f"unknown family {P.family!r}")
    return float(value) if scalar else value
