"""One-dimensional bases on [0, 1], domain mappings, and tensor bases.

The regression surface lives on [0, 1] x R (or [0, 1] x R+).  Space is
handled by composing a [0, 1]-basis with a monotone change of variable
y(x) = (u(x; s) + 1) / 2, where u maps the unbounded domain onto
(-1, 1).  The two-dimensional basis is the tensor product of the time
basis and the mapped space basis.

Families
--------
fourier      1, sqrt(2) cos(2 pi t), sqrt(2) sin(2 pi t), sqrt(2) cos(4 pi t), ...
legendre     shifted Legendre polynomials, unit L2([0, 1]) norm
chebyshev1   shifted Chebyshev T polynomials, numerically scaled to unit
             L2([0, 1]) norm (mutually orthogonal only under the
             Chebyshev weight; the Gram matrix downstream accounts for
             that)
jacobi       shifted Jacobi polynomials with the square-root weight
             folded in, so they are orthonormal in L2([0, 1])
daubechies   the 2^Jn periodized Daubechies scaling functions at level Jn

The space basis is the *unweighted* composition phi(y(x)).  The
sqrt(u'(x))-weighted variant used for L2(R)-orthonormality is available
through ``SieveSpec(weighted_space=True)`` but is not used in
estimation: all inference integrals are taken in the transformed
(t, y) coordinates where the unweighted family is the natural one.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import eval_chebyt, eval_jacobi, eval_legendre, gammaln

from . import wavelets
from .errors import ConfigError, DomainError
from .quadrature import gauss_legendre_01

_POLY_KINDS = ("legendre", "chebyshev1", "jacobi")
_MAPPING_KINDS = (
    "identity",
    "algebraic_r",
    "logarithmic_r",
    "algebraic_rplus",
    "logarithmic_rplus",
)


@dataclass(frozen=True)
class BasisFamily:
    """A family of 1-D basis functions on [0, 1], indexed from 1."""

    kind: str
    alpha: float = 0.0
    beta: float = 0.0
    order: int = 0
    jn: int = 0
    j0: int = 0

    def __post_init__(self):
        if self.kind in ("fourier", "legendre", "chebyshev1"):
            return
        if self.kind == "jacobi":
            if self.alpha <= -1.0 or self.beta <= -1.0:
                raise ConfigError("jacobi requires alpha > -1 and beta > -1")
        elif self.kind == "daubechies":
            if not 2 <= self.order <= 10:
                raise ConfigError("daubechies order must be in 2..10")
            if self.j0 < 0 or self.jn <= self.j0:
                raise ConfigError("daubechies levels require 0 <= J0 < Jn")
        else:
            raise ConfigError(f"unknown basis family {self.kind!r}")

    @property
    def capacity(self):
        """Largest admissible basis index; None when unbounded."""
        if self.kind == "daubechies":
            return 2**self.jn
        return None

    def check_count(self, count):
        cap = self.capacity
        if count < 1 or (cap is not None and count > cap):
            raise ConfigError(
                f"{self.kind} family supports at most {cap} functions, "
                f"requested {count}"
            )


def fourier():
    return BasisFamily("fourier")


def legendre():
    return BasisFamily("legendre")


def chebyshev1():
    return BasisFamily("chebyshev1")


def jacobi(alpha, beta):
    return BasisFamily("jacobi", alpha=float(alpha), beta=float(beta))


def daubechies(order, jn, j0=0):
    return BasisFamily("daubechies", order=int(order), jn=int(jn), j0=int(j0))


def _jacobi_log_gamma(k, a, b):
    # squared L2 norm of the Jacobi polynomial under its weight on (-1, 1)
    if k == 0:
        return (a + b + 1) * math.log(2.0) + gammaln(a + 1) + gammaln(b + 1) - gammaln(a + b + 2)
    return (
        (a + b + 1) * math.log(2.0)
        + gammaln(k + a + 1)
        + gammaln(k + b + 1)
        - math.log(2 * k + a + b + 1)
        - gammaln(k + 1)
        - gammaln(k + a + b + 1)
    )


_CHEB_NORMS = {}


def _chebyshev_norm(degree):
    # L2([0, 1]) norm of T_degree(2t - 1), computed by quadrature once
    if degree not in _CHEB_NORMS:
        x, w = gauss_legendre_01(128)
        vals = eval_chebyt(degree, 2.0 * x - 1.0)
        _CHEB_NORMS[degree] = math.sqrt(float(np.dot(w, vals**2)))
    return _CHEB_NORMS[degree]


def eval_unit_basis(family, index, y):
    """Evaluate basis function ``index`` (1-based) at points of [0, 1]."""
    y = np.asarray(y, dtype=float)
    if np.any((y < 0.0) | (y > 1.0)):
        raise DomainError("basis argument outside [0, 1]")
    if index < 1:
        raise ConfigError("basis index starts at 1")
    family.check_count(index)
    if family.kind == "fourier":
        if index == 1:
            return np.ones_like(y)
        m = index // 2
        arg = 2.0 * math.pi * m * y
        return math.sqrt(2.0) * (np.cos(arg) if index % 2 == 0 else np.sin(arg))
    if family.kind == "legendre":
        k = index - 1
        return math.sqrt(2.0 * k + 1.0) * eval_legendre(k, 2.0 * y - 1.0)
    if family.kind == "chebyshev1":
        k = index - 1
        return eval_chebyt(k, 2.0 * y - 1.0) / _chebyshev_norm(k)
    if family.kind == "jacobi":
        k = index - 1
        a, b = family.alpha, family.beta
        z = 2.0 * y - 1.0
        log_gamma = _jacobi_log_gamma(k, a, b)
        with np.errstate(divide="ignore"):
            weight = np.exp(
                0.5 * (a * np.log(1.0 - z) + b * np.log(1.0 + z))
                + 0.5 * (math.log(2.0) - log_gamma)
            )
        return weight * eval_jacobi(k, a, b, z)
    # daubechies
    return wavelets.periodized_scaling(family.order, family.jn, index - 1, y)


def eval_time_basis(family, index, t):
    """phi_index(t) on [0, 1]; scalar in, scalar out."""
    t_arr = np.asarray(t, dtype=float)
    out = eval_unit_basis(family, index, t_arr)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def unit_basis_matrix(family, count, y):
    """(len(y), count) matrix of the first ``count`` basis functions."""
    family.check_count(count)
    y = np.asarray(y, dtype=float)
    cols = [eval_unit_basis(family, i, y) for i in range(1, count + 1)]
    return np.column_stack(cols)


@dataclass(frozen=True)
class Mapping:
    """Monotone map between the covariate domain and the open unit interval.

    ``s`` is the scale of the map; ``None`` means "resolve from data"
    (the sample standard deviation) before first use.
    """

    kind: str
    s: float | None = None

    def __post_init__(self):
        if self.kind not in _MAPPING_KINDS:
            raise ConfigError(f"unknown mapping kind {self.kind!r}")
        if self.s is not None and not self.s > 0.0:
            raise ConfigError("mapping scale s must be positive")

    def resolved(self, data):
        """Return a copy with s set to the standard deviation of ``data``."""
        if self.s is not None or self.kind == "identity":
            return self
        s = float(np.std(np.asarray(data, dtype=float)))
        if not s > 0.0:
            raise ConfigError("cannot infer mapping scale from constant data")
        return replace(self, s=s)

    def _scale(self):
        if self.kind == "identity":
            return 1.0
        if self.s is None:
            raise ConfigError("mapping scale s is unresolved; call resolved(data)")
        return self.s


def identity_map():
    return Mapping("identity", 1.0)


def map_to_unit(mapping, x):
    """y(x) = (u(x; s) + 1) / 2, strictly inside (0, 1).

    Raises DomainError when x lies outside the mapping's domain or is so
    large that y would collapse onto {0, 1} in double precision.
    """
    s = mapping._scale()
    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x_arr)):
        raise DomainError("non-finite covariate value")
    if mapping.kind == "identity":
        if np.any((x_arr < 0.0) | (x_arr > 1.0)):
            raise DomainError("identity mapping expects data in [0, 1]")
        y = x_arr
    elif mapping.kind == "algebraic_r":
        # u = x / sqrt(x^2 + s^2), computed in a form stable for large |x|
        u = x_arr / np.hypot(x_arr, s)
        y = 0.5 * (u + 1.0)
    elif mapping.kind == "logarithmic_r":
        u = np.tanh(x_arr / s)
        y = 0.5 * (u + 1.0)
    elif mapping.kind == "algebraic_rplus":
        if np.any(x_arr <= 0.0):
            raise DomainError("R+ mapping requires x > 0")
        u = (x_arr - s) / (x_arr + s)
        y = 0.5 * (u + 1.0)
    else:  # logarithmic_rplus
        if np.any(x_arr <= 0.0):
            raise DomainError("R+ mapping requires x > 0")
        with np.errstate(over="ignore"):
            e = np.exp(2.0 * x_arr / s)
            u = 1.0 - 4.0 / (e + 1.0)
        y = 0.5 * (u + 1.0)
    if mapping.kind != "identity" and np.any((y <= 0.0) | (y >= 1.0)):
        raise DomainError("mapped value collapsed onto the interval boundary")
    return y if x_arr.ndim else float(y)


def map_from_unit(mapping, y):
    """Inverse of map_to_unit: x = g(2y - 1; s)."""
    s = mapping._scale()
    y_arr = np.asarray(y, dtype=float)
    if mapping.kind == "identity":
        if np.any((y_arr < 0.0) | (y_arr > 1.0)):
            raise DomainError("unit coordinate outside [0, 1]")
        return y_arr if y_arr.ndim else float(y_arr)
    if np.any((y_arr <= 0.0) | (y_arr >= 1.0)):
        raise DomainError("unit coordinate outside the open interval (0, 1)")
    u = 2.0 * y_arr - 1.0
    if mapping.kind == "algebraic_r":
        x = s * u / np.sqrt((1.0 - u) * (1.0 + u))
    elif mapping.kind == "logarithmic_r":
        x = s * np.arctanh(u)
    elif mapping.kind == "algebraic_rplus":
        x = s * (1.0 + u) / (1.0 - u)
    else:  # logarithmic_rplus
        x = 0.5 * s * np.log((3.0 + u) / (1.0 - u))
    return x if y_arr.ndim else float(x)


def mapping_weight(mapping, x):
    """sqrt(dy/dx), the weight making the mapped family L2-orthonormal
    on the original domain."""
    s = mapping._scale()
    x_arr = np.asarray(x, dtype=float)
    if mapping.kind == "identity":
        return np.ones_like(x_arr)
    if mapping.kind == "algebraic_r":
        du = s**2 / np.hypot(x_arr, s) ** 3
    elif mapping.kind == "logarithmic_r":
        du = (1.0 / s) / np.cosh(x_arr / s) ** 2
    elif mapping.kind == "algebraic_rplus":
        du = 2.0 * s / (x_arr + s) ** 2
    else:
        with np.errstate(over="ignore"):
            e = np.exp(2.0 * x_arr / s)
            du = np.where(np.isinf(e), 0.0, 8.0 * e / (s * (e + 1.0) ** 2))
    return np.sqrt(0.5 * du)


@dataclass(frozen=True)
class SieveSpec:
    """Everything that pins down the two-dimensional sieve.

    c and d are the truncation orders of the time and space bases, r the
    number of regression functions (lags in the autoregressive case).
    """

    time_family: BasisFamily
    space_family: BasisFamily
    mapping: Mapping
    c: int
    d: int
    r: int = 1
    weighted_space: bool = False

    def __post_init__(self):
        if self.c < 1 or self.d < 1 or self.r < 1:
            raise ConfigError("c, d, r must all be >= 1")
        self.time_family.check_count(self.c)
        self.space_family.check_count(self.d)
        if self.r * self.c * self.d > 2**31:
            raise ConfigError("p = r*c*d too large")

    @property
    def p(self):
        return self.r * self.c * self.d

    def resolved(self, data):
        """Resolve a data-driven mapping scale against covariate values."""
        return replace(self, mapping=self.mapping.resolved(data))

    def with_orders(self, c, d):
        return replace(self, c=int(c), d=int(d))


def space_basis_matrix(spec, x):
    """(len(x), d) matrix of mapped space basis values at covariates x."""
    y = np.atleast_1d(map_to_unit(spec.mapping, x))
    mat = unit_basis_matrix(spec.space_family, spec.d, y)
    if spec.weighted_space:
        mat = mat * mapping_weight(spec.mapping, np.atleast_1d(x))[:, None]
    return mat


def eval_space_basis(spec, index, x):
    """Mapped space basis function value phi_index(y(x))."""
    if index < 1 or index > spec.d:
        raise ConfigError("space basis index outside 1..d")
    return space_basis_matrix(spec, np.atleast_1d(x))[:, index - 1] if np.ndim(x) else float(
        space_basis_matrix(spec, [x])[0, index - 1]
    )


def time_basis_matrix(spec, t):
    """(len(t), c) matrix of time basis values."""
    return unit_basis_matrix(spec.time_family, spec.c, np.atleast_1d(t))


def eval_tensor_basis(spec, t, x):
    """Length c*d vector with entry (l1-1)*d + l2 equal to phi_l1(t) phi_l2(x).

    The flat ordering matches the coefficient layout used by the
    estimation module, so the vector can be dotted directly against a
    single function's coefficient block.
    """
    tv = time_basis_matrix(spec, [t])[0]
    sv = space_basis_matrix(spec, [x])[0]
    return np.outer(tv, sv).reshape(-1)
