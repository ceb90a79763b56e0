"""Design matrix construction, OLS fitting, and surface prediction.

Coefficient layout: the flat index of coefficient (j, l1, l2) with
j in 1..r (function), l1 in 1..c (time basis), l2 in 1..d (space basis)
is k = (j-1) c d + (l1-1) d + l2.  Every module uses this bijection; the
design matrix columns, the bootstrap vectors and the B matrix all share
it, so coefficient blocks can be reshaped to (c, d) arrays at will.

Data comes in two layouts: a 1-D array is the autoregressive case where
the covariates are the first r lags of the series itself; a 2-D array of
shape (n, r+1) is the exogenous-predictor case with the response in
column 0 and X_1..X_r in the remaining columns.
"""

from dataclasses import dataclass

import numpy as np

from . import bases
from .errors import ConfigError, DataError, SingularDesignError

RANK_RTOL = 1e-10


@dataclass(frozen=True)
class IndexMap:
    """Bijection between flat coefficient indices and (j, l1, l2) triples."""

    r: int
    c: int
    d: int

    def flat(self, j, l1, l2):
        if not (1 <= j <= self.r and 1 <= l1 <= self.c and 1 <= l2 <= self.d):
            raise ConfigError("index triple outside the coefficient grid")
        return (j - 1) * self.c * self.d + (l1 - 1) * self.d + l2

    def unflat(self, k):
        p = self.r * self.c * self.d
        if not 1 <= k <= p:
            raise ConfigError(f"flat index {k} outside 1..{p}")
        k0 = k - 1
        j, rem = divmod(k0, self.c * self.d)
        l1, l2 = divmod(rem, self.d)
        return j + 1, l1 + 1, l2 + 1


def _split_data(data, spec):
    """Response vector, covariate matrix (n-r, r) and sample size."""
    arr = np.asarray(data, dtype=float)
    bad = ~np.isfinite(arr)
    if bad.any():
        row = int(np.argwhere(bad)[0][0]) + 1
        raise DataError(f"non-finite value in input data at row {row}")
    r = spec.r
    if arr.ndim == 1:
        n = arr.size
        if n <= r:
            raise ConfigError(f"need more than r={r} observations, got {n}")
        y = arr[r:]
        lags = np.column_stack([arr[r - j : n - j] for j in range(1, r + 1)])
        return y, lags, n, arr
    if arr.ndim == 2:
        n, cols = arr.shape
        if cols != r + 1:
            raise ConfigError(
                f"panel has {cols - 1} covariate columns but spec.r = {r}"
            )
        if n <= r:
            raise ConfigError(f"need more than r={r} observations, got {n}")
        return arr[r:, 0], arr[r:, 1:], n, arr[:, 1:]
    raise DataError("data must be a 1-D series or a 2-D (n, r+1) panel")


def resolve_spec(data, spec):
    """Fill in a data-driven mapping scale from the covariate values."""
    _, _, _, covariates = _split_data(data, spec)
    return spec.resolved(np.ravel(covariates))


def row_times(n, r):
    """Rescaled times i/n of the design rows i = r+1..n."""
    return np.arange(r + 1, n + 1) / n


def regressor_matrix(data, spec):
    """(n-r, r*d) matrix with row i holding phi_l2(X_{j, at row i}), j-major."""
    _, lagged, n, _ = _split_data(data, spec)
    blocks = [bases.space_basis_matrix(spec, lagged[:, j]) for j in range(spec.r)]
    return np.hstack(blocks)


def regressor_vector(data, spec, i):
    """Space-basis-only regressor w_i for one time index i in r+1..n."""
    _, _, n, _ = _split_data(data, spec)
    if not spec.r < i <= n:
        raise ConfigError(f"time index must lie in {spec.r + 1}..{n}")
    return regressor_matrix(data, spec)[i - spec.r - 1]


def build_design(data, spec):
    """Design matrix W of shape (n-r, p), rows ordered by time index r+1..n.

    Entry (row for time i, column (j, l1, l2)) is
    phi_l1(i/n) * phi_l2(X at lag/covariate j).
    """
    y, _, n, _ = _split_data(data, spec)
    p = spec.p
    a = bases.time_basis_matrix(spec, row_times(n, spec.r))  # (n-r, c)
    w = regressor_matrix(data, spec).reshape(n - spec.r, spec.r, spec.d)
    design = np.einsum("ik,ijl->ijkl", a, w).reshape(n - spec.r, p)
    return design, y


@dataclass
class FitResult:
    """OLS fit of the sieve coefficients plus everything inference needs."""

    beta_hat: np.ndarray
    pi_hat: np.ndarray
    residuals: np.ndarray
    spec: bases.SieveSpec
    n: int
    condition_estimate: float

    @property
    def index_map(self):
        return IndexMap(self.spec.r, self.spec.c, self.spec.d)

    @property
    def p(self):
        return self.spec.p

    def coefficient_block(self, j):
        """(c, d) coefficient array of function j."""
        cd = self.spec.c * self.spec.d
        if not 1 <= j <= self.spec.r:
            raise ConfigError(f"function index {j} outside 1..{self.spec.r}")
        return self.beta_hat[(j - 1) * cd : j * cd].reshape(self.spec.c, self.spec.d)

    def pi_solve(self, rhs):
        """Solve pi_hat @ x = rhs, caching the factorisation."""
        if not hasattr(self, "_pi_factor"):
            from scipy.linalg import cho_factor

            object.__setattr__(self, "_pi_factor", cho_factor(self.pi_hat))
        from scipy.linalg import cho_solve

        return cho_solve(self._pi_factor, rhs)

    def residual_sd(self):
        return float(np.std(self.residuals, ddof=0))


def ols_fit(design, y, spec=None, n=None):
    """Least squares by SVD with an explicit numerical-rank check.

    pi_hat is W'W / n as the inference formulas require (note the 1/n
    with n the full sample size, not the row count).
    """
    design = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)
    if design.shape[0] != y.size:
        raise ConfigError("design rows and response length differ")
    rows, p = design.shape
    if rows < p:
        raise ConfigError(
            f"under-determined design: {rows} rows for p = {p} columns"
        )
    if n is None:
        n = rows + (spec.r if spec is not None else 0)
    u, s, vt = np.linalg.svd(design, full_matrices=False)
    if s[0] == 0.0 or s[-1] / s[0] < RANK_RTOL:
        cond = float("inf") if s[-1] == 0.0 else float(s[0] / s[-1])
        raise SingularDesignError(
            f"design numerically rank deficient (condition ~ {cond:.3e})",
            condition=cond,
        )
    condition = float(s[0] / s[-1])
    beta = vt.T @ ((u.T @ y) / s)
    residuals = y - design @ beta
    pi_hat = design.T @ design / n
    pi_hat = 0.5 * (pi_hat + pi_hat.T)
    return FitResult(
        beta_hat=beta,
        pi_hat=pi_hat,
        residuals=residuals,
        spec=spec,
        n=int(n),
        condition_estimate=condition,
    )


def fit_series(data, spec):
    """Resolve the mapping scale, build the design, and run OLS."""
    spec = resolve_spec(data, spec)
    design, y = build_design(data, spec)
    n = np.asarray(data).shape[0]
    return ols_fit(design, y, spec=spec, n=n)


def predict_m(fit, j, t, x):
    """Fitted surface value m_hat_j(t, x)."""
    tv = bases.time_basis_matrix(fit.spec, [t])[0]
    sv = bases.space_basis_matrix(fit.spec, [x])[0]
    return float(tv @ fit.coefficient_block(j) @ sv)


def predict_surface(fit, j, t_grid, x_grid):
    """Fitted values of function j on the tensor grid t_grid x x_grid."""
    a = bases.time_basis_matrix(fit.spec, np.asarray(t_grid, dtype=float))
    sb = bases.space_basis_matrix(fit.spec, np.asarray(x_grid, dtype=float))
    return a @ fit.coefficient_block(j) @ sb.T


def fitted_values(fit, data):
    """In-sample fitted responses sum_j m_hat_j at each design row."""
    design, _ = build_design(data, fit.spec)
    return design @ fit.beta_hat
