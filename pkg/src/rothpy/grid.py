"""
Functions sampled on a uniform periodic grid.

Everything lives on the torus [0, L) sampled at N points x_j = j*h, h = L/N.
Data supported in [0, 1] is zero extended onto the torus. With L >= 4 no
pattern {x, x - t, x - P(t)} with x in [0, 1] and t in (0, 1] wraps back
into the support for the supported curves.

Fourier convention (unitary with h weights):

    F(xi) = h * sum_x f(x) e(-x xi / L)
    f(x)  = (1 / L) * sum_xi F(xi) e(x xi / L)

so that ||f||_2^2 = h * sum |f|^2 = (1 / L) * sum |F|^2. Spectral arrays use
the numpy.fft layout: index i holds integer frequency i for i < N/2 and
i - N for i >= N/2.
"""
import base64
import json
import numpy as np
from . import errors
from . import util


PHYSICAL = "physical"
SPECTRAL = "spectral"
FORMS = (PHYSICAL, SPECTRAL)
MIN_N = 2**6


class TorusConfig:
    """Circumference L and resolution N of the ambient periodic grid."""

    def __init__(self, L=4.0, N=2**16):
        try:
            n = int(N)
        except (TypeError, ValueError):
            raise errors.ConfigurationError(f"N must be an integer, got {N!r}")
        if n != N or not util.is_power_of_two(n):
            raise errors.ConfigurationError(f"N must be a power of two, got {N}")
        if n < MIN_N:
            raise errors.ConfigurationError(f"N must be >= {MIN_N}, got {N}")
        L = float(L)
        if not L > 0:
            raise errors.ConfigurationError(f"L must be > 0, got {L}")
        self.L = L
        self.N = n

    @property
    def h(self):
        """Grid spacing. Exact, N is a power of two."""
        return self.L / self.N

    @property
    def x(self):
        """Sample locations x_j = j*h."""
        return np.arange(self.N) * self.h

    @property
    def frequencies(self):
        """Integer frequencies in array layout."""
        return np.fft.fftfreq(self.N, d=1.0 / self.N).astype(np.int64)

    @property
    def physical_frequencies(self):
        """Frequencies in cycles per unit length, xi / L."""
        return self.frequencies / self.L

    @property
    def nyquist(self):
        """Largest representable physical frequency, N / 2L."""
        return self.N / (2 * self.L)

    def to_dict(self):
        return {"L": self.L, "N": self.N}

    def __eq__(self, other):
        return isinstance(other, TorusConfig) and self.L == other.L and self.N == other.N

    def __hash__(self):
        return hash((self.L, self.N))

    def __repr__(self):
        return f"TorusConfig(L={self.L}, N={self.N})"


def frequency_index(config, xi):
    """Array index of integer frequency xi in {-N/2, ..., N/2 - 1}."""
    xi = np.asarray(xi, dtype=np.int64)
    if np.any(xi < -config.N // 2) or np.any(xi >= config.N // 2):
        raise errors.RangeError(f"frequency outside [-{config.N // 2}, {config.N // 2 - 1}]")
    return xi % config.N


def index_frequency(config, index):
    """Integer frequency held at array index."""
    index = np.asarray(index, dtype=np.int64)
    if np.any(index < 0) or np.any(index >= config.N):
        raise errors.RangeError(f"index outside [0, {config.N - 1}]")
    return np.where(index < config.N // 2, index, index - config.N)


class GridFunction:
    """
    Immutable samples of a function on the torus.

    Parameters
    ----------
    config: TorusConfig
    samples: array-like of length config.N
        Real or complex values.
    form: str, default "physical"
        "physical" for point samples, "spectral" for transform values.
    hermitian: bool, optional
        Spectral form only. True if the physical function is real, so the
        inverse transform returns real samples. Set by transform().
    """

    def __init__(self, config, samples, form=PHYSICAL, hermitian=False):
        if form not in FORMS:
            raise errors.ConfigurationError(f"form must be one of {FORMS}, got {form!r}")
        samples = np.array(samples, copy=True)
        if samples.ndim != 1 or len(samples) != config.N:
            raise errors.ConfigurationError(
                f"expected {config.N} samples, got shape {samples.shape}"
            )
        if np.iscomplexobj(samples):
            samples = samples.astype(np.complex128)
        else:
            samples = samples.astype(np.float64)
        samples.setflags(write=False)
        self.config = config
        self.samples = samples
        self.form = form
        self.hermitian = bool(hermitian) if form == SPECTRAL else False

    @property
    def is_complex(self):
        return np.iscomplexobj(self.samples)

    def _combine(self, other, op):
        if isinstance(other, GridFunction):
            check_compatible(self, other)
            values = op(self.samples, other.samples)
            hermitian = self.hermitian and other.hermitian
        else:
            values = op(self.samples, other)
            hermitian = self.hermitian and np.isrealobj(other)
        return GridFunction(self.config, values, form=self.form, hermitian=hermitian)

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: np.subtract(b, a))

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.config, -self.samples, form=self.form, hermitian=self.hermitian)

    def __len__(self):
        return self.config.N

    def __repr__(self):
        return f"GridFunction({self.config!r}, form={self.form!r})"

    def to_json(self):
        """
        JSON text: header {L, N, form} plus base64 little-endian float64 data.

        Complex samples are stored as interleaved real/imaginary float64
        pairs and flagged with "complex": true.
        """
        values = self.samples
        if self.is_complex:
            values = np.column_stack([values.real, values.imag]).ravel()
        data = base64.b64encode(np.ascontiguousarray(values, dtype="<f8").tobytes()).decode("ascii")
        doc = {
            "L": self.config.L,
            "N": self.config.N,
            "form": self.form,
            "complex": self.is_complex,
            "hermitian": self.hermitian,
            "data": data,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
            config = TorusConfig(L=doc["L"], N=doc["N"])
            values = np.frombuffer(base64.b64decode(doc["data"]), dtype="<f8")
        except (KeyError, ValueError, TypeError) as e:
            raise errors.ValidationError(f"Could not parse grid function JSON: {e}")
        if doc.get("complex", False):
            values = values[0::2] + 1j * values[1::2]
        return cls(config, values, form=doc.get("form", PHYSICAL), hermitian=doc.get("hermitian", False))


def check_compatible(*fs):
    """Raise ConfigurationError unless all functions share config and form."""
    first = fs[0]
    for f in fs[1:]:
        if f.config != first.config:
            raise errors.ConfigurationError(f"mismatched grid configs: {first.config} vs {f.config}")
        if f.form != first.form:
            raise errors.ConfigurationError(f"mismatched forms: {first.form} vs {f.form}")


def _require_form(f, form):
    if f.form != form:
        raise errors.ValidationError(f"expected {form} form, got {f.form}")


def zeros(config):
    return GridFunction(config, np.zeros(config.N))


def constant(config, value=1.0):
    return GridFunction(config, np.full(config.N, value))


def indicator(config, a, b):
    """Rasterized indicator of [a, b), half-open, x_j in [a, b) -> 1."""
    x = config.x
    return GridFunction(config, ((x >= a) & (x < b)).astype(float))


def wave(config, m):
    """Pure wave e(x m / L) with integer frequency m."""
    return GridFunction(config, np.exp(2j * np.pi * m * config.x / config.L))


def delta_mass(config):
    """Dirac mass approximation 1/h at index 0, the identity for convolve()."""
    values = np.zeros(config.N)
    values[0] = 1.0 / config.h
    return GridFunction(config, values)


def transform(f):
    """
    Forward transform F(xi) = h * sum_x f(x) e(-x xi / L).

    Returns a spectral GridFunction. Real input gives a hermitian spectrum.
    """
    _require_form(f, PHYSICAL)
    if not util.is_power_of_two(len(f.samples)):
        raise errors.ConfigurationError("transform length must be a power of two")
    spectrum = f.config.h * np.fft.fft(f.samples)
    return GridFunction(f.config, spectrum, form=SPECTRAL, hermitian=not f.is_complex)


def inverse(F):
    """Inverse transform f(x) = (1 / L) * sum_xi F(xi) e(x xi / L)."""
    _require_form(F, SPECTRAL)
    if not util.is_power_of_two(len(F.samples)):
        raise errors.ConfigurationError("transform length must be a power of two")
    values = np.fft.ifft(F.samples) / F.config.h
    if F.hermitian:
        values = values.real
    return GridFunction(F.config, values)


def apply_multiplier(f, multiplier):
    """
    Inverse transform of transform(f) * multiplier.

    multiplier is a real array in spectral layout, even in xi, so real
    inputs stay real.
    """
    F = transform(f)
    return inverse(GridFunction(f.config, F.samples * multiplier, form=SPECTRAL, hermitian=F.hermitian))


def convolve(f, g):
    """Periodic convolution (f*g)(x) = h * sum_t f(t) g(x - t), computed spectrally."""
    check_compatible(f, g)
    _require_form(f, PHYSICAL)
    F = transform(f)
    G = transform(g)
    return inverse(GridFunction(f.config, F.samples * G.samples, form=SPECTRAL,
                                hermitian=F.hermitian and G.hermitian))


def norm(f, p=2):
    """h-weighted L^p norm over the torus for p in {1, 2, inf}."""
    _require_form(f, PHYSICAL)
    values = np.abs(f.samples)
    if p == 1:
        return float(f.config.h * values.sum())
    if p == 2:
        return float(np.sqrt(f.config.h * np.sum(values**2)))
    if p in (np.inf, "inf"):
        return float(values.max())
    raise errors.ValidationError(f"p must be 1, 2 or inf, got {p!r}")


def spectral_norm(F):
    """l2 norm of a spectrum under the unitary convention, sqrt(sum |F|^2 / L)."""
    _require_form(F, SPECTRAL)
    return float(np.sqrt(np.sum(np.abs(F.samples)**2) / F.config.L))


def inner(f, g):
    """h-weighted inner product sum f * conj(g) * h."""
    check_compatible(f, g)
    _require_form(f, PHYSICAL)
    value = f.config.h * np.sum(f.samples * np.conj(g.samples))
    return complex(value) if np.iscomplexobj(value) else float(value)


def _radius_samples(config, r):
    m = int(round(r / config.h))
    if m < 1:
        raise errors.ResolutionError(f"radius {r} is below grid spacing {config.h}")
    if 2 * m + 1 > config.N:
        raise errors.ResolutionError(f"radius {r} does not fit in torus of length {config.L}")
    return m


def centered_average(f, r):
    """
    Centered average (1/2r) * integral_{-r}^{r} f(x - t) dt on the grid.

    Uses the 2m+1 samples within m = round(r / h) steps of x, computed with a
    wrapped cumulative sum.
    """
    _require_form(f, PHYSICAL)
    m = _radius_samples(f.config, r)
    values = f.samples
    extended = np.concatenate([values[-m:], values, values[:m]])
    csum = np.concatenate([[0.0], np.cumsum(extended)])
    width = 2 * m + 1
    window = csum[width:width + f.config.N] - csum[:f.config.N]
    return GridFunction(f.config, window / width)


def hl_maximal(f, scales):
    """
    Hardy-Littlewood maximal function over a finite list of radii.

    Pointwise maximum over scales of centered_average(f, r).
    """
    scales = list(scales)
    if not scales:
        raise errors.ValidationError("hl_maximal needs at least one radius")
    _require_form(f, PHYSICAL)
    if f.is_complex or np.any(f.samples < 0):
        raise errors.ValidationError("hl_maximal requires a nonnegative real function")
    best = None
    for r in scales:
        avg = centered_average(f, r).samples
        best = avg if best is None else np.maximum(best, avg)
    return GridFunction(f.config, best)
