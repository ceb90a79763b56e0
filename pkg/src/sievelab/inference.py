"""Multiplier bootstrap: confidence regions and hypothesis tests.

The central object is the bootstrap vector

    Xi = (n-m-r)^{-1/2} m^{-1/2} sum_{i=r+1}^{n-m}
             [ (sum_{j=i}^{i+m} xhat_j) kron a(t_i) ] R_i,

with xhat_j the residual-weighted space regressors, a(t) the time basis
vector, and R_i i.i.d. standard Gaussians.  Conditional on the data Xi
mimics the fluctuation of the scaled estimation error, so linear
functionals of Xi calibrate the confidence region and quadratic forms
calibrate the L2 test.

Integration convention: every integral over the unbounded covariate is
taken on the unit square in the transformed coordinates (t, y), with
x = g(2y - 1; s).  The raw dx integrals would diverge for the unweighted
mapped bases; the transformed-coordinate form is the one under which the
basis families are orthonormal (see README).

One Xi draw is shared across all grid points within a replication.  A
fresh draw per grid point would destroy the spatial dependence that the
sup statistic in the confidence-region construction needs.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import bases, estimate
from ._streams import stream
from .errors import ConfigError, DegenerateVarianceError
from .quadrature import gauss_legendre_01

QUAD_NODES = 64


@dataclass(frozen=True)
class BootstrapConfig:
    """Tuning knobs of the multiplier bootstrap.

    m is the block size, B the number of draws behind the pointwise
    standard deviations (and test null draws), M the number behind the
    sup statistic.  B, M below 100 are tolerated but warned about.
    """

    m: int
    B: int = 1000
    M: int = 1000
    grid_t: int = 100
    grid_y: int = 100
    seed: int = 0
    alpha: float = 0.05

    def __post_init__(self):
        if self.m < 1:
            raise ConfigError("block size m must be >= 1")
        if self.B < 1 or self.M < 1:
            raise ConfigError("B and M must be >= 1")
        if self.B < 100 or self.M < 100:
            warnings.warn(
                "B or M below 100; results are for smoke tests only",
                stacklevel=3,
            )
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.grid_t < 2 or self.grid_y < 2:
            raise ConfigError("grid sizes must be >= 2")


@dataclass
class ScrResult:
    """Simultaneous confidence region on a tensor grid."""

    t_grid: np.ndarray
    y_grid: np.ndarray
    x_grid: np.ndarray
    m_hat: np.ndarray
    h_hat: np.ndarray
    c_alpha_hat: float
    lower: np.ndarray
    upper: np.ndarray
    alpha: float
    j: int
    sup_draws: np.ndarray = field(repr=False)

    def covers(self, truth):
        """Whether a true surface (callable or grid array) stays inside."""
        if callable(truth):
            tt, xx = np.meshgrid(self.t_grid, self.x_grid, indexing="ij")
            values = np.vectorize(truth)(tt, xx)
        else:
            values = np.asarray(truth, dtype=float)
        return bool(np.all((values >= self.lower) & (values <= self.upper)))


@dataclass(frozen=True)
class TestResult:
    """Outcome of one bootstrap-calibrated hypothesis test."""

    kind: str
    statistic: float
    null_draws_count: int
    p_value: float
    reject_at_alpha: bool
    alpha: float


def _order_statistic(draws, alpha):
    """Empirical (1-alpha) critical value: order statistic floor(K(1-alpha))."""
    draws = np.sort(np.asarray(draws, dtype=float))
    k = draws.size
    idx = min(max(int(math.floor(k * (1.0 - alpha))), 1), k)
    return float(draws[idx - 1])


def _p_value(draws, statistic):
    """1 - B*/B with B* the number of null draws <= statistic."""
    draws = np.asarray(draws, dtype=float)
    return float(1.0 - np.count_nonzero(draws <= statistic) / draws.size)


class _XiWorkspace:
    """Precomputed pieces shared by all Xi draws for one (fit, data, m)."""

    def __init__(self, fit, data, m):
        spec = fit.spec
        n, r = fit.n, spec.r
        if m > n - r - 1:
            raise ConfigError(f"block size m={m} too large for n={n}, r={r}")
        w = estimate.regressor_matrix(data, spec)  # (n-r, r*d)
        xhat = w * fit.residuals[:, None]
        # sliding block sums over windows of m+1 consecutive rows
        csum = np.vstack([np.zeros((1, w.shape[1])), np.cumsum(xhat, axis=0)])
        blocks = csum[m + 1 :] - csum[: -(m + 1)]  # rows i = r+1 .. n-m
        times = np.arange(r + 1, n - m + 1) / n
        a = bases.time_basis_matrix(spec, times)  # (n-m-r, c)
        y = np.einsum(
            "qjl,qk->qjkl", blocks.reshape(-1, spec.r, spec.d), a
        ).reshape(-1, spec.p)
        self.y = y
        self.count = y.shape[0]
        self.scale = 1.0 / math.sqrt((n - m - r) * m)

    def draw(self, seed, stream_id):
        r_mult = stream(seed, "xi", stream_id).standard_normal(self.count)
        return self.scale * (self.y.T @ r_mult)

    def draw_batch(self, seed, stream_ids):
        out = np.empty((self.y.shape[1], len(stream_ids)))
        for col, sid in enumerate(stream_ids):
            out[:, col] = self.draw(seed, sid)
        return out


def draw_xi(fit, data, cfg, stream_id):
    """One multiplier bootstrap vector, deterministic given (seed, stream_id)."""
    return _XiWorkspace(fit, data, cfg.m).draw(cfg.seed, stream_id)


def t1_draw(xi, fit, j, t, x):
    """Linear bootstrap statistic Xi' pi_hat^{-1} b at one point."""
    v = fit.pi_solve(np.asarray(xi, dtype=float))
    cd = fit.spec.c * fit.spec.d
    block = v[(j - 1) * cd : j * cd]
    return float(bases.eval_tensor_basis(fit.spec, t, x) @ block)


def _t1_grid(fit, j, a_mat, sb_mat, xi_mat):
    """T1 draws on a tensor grid for a batch of Xi columns.

    Returns an array (len t, len x, draws).
    """
    v = fit.pi_solve(xi_mat)  # (p, K)
    cd = fit.spec.c * fit.spec.d
    vblocks = v[(j - 1) * cd : j * cd].reshape(fit.spec.c, fit.spec.d, -1)
    return np.einsum("tc,cdk,xd->txk", a_mat, vblocks, sb_mat, optimize=True)


def _midpoint_grid(size):
    return (np.arange(size) + 0.5) / size


def scr(fit, data, cfg, j=1):
    """Simultaneous confidence region for function j.

    The grid is uniform in (t, y) on the unit square with x recovered
    through the inverse mapping.  B shared draws give the pointwise
    standard deviation h_hat, M further shared draws give the critical
    value as the floor(M(1-alpha)) order statistic of the sup statistic.
    """
    spec = fit.spec
    t_grid = _midpoint_grid(cfg.grid_t)
    y_grid = _midpoint_grid(cfg.grid_y)
    x_grid = np.asarray(bases.map_from_unit(spec.mapping, y_grid))

    a_mat = bases.time_basis_matrix(spec, t_grid)
    sb_mat = bases.space_basis_matrix(spec, x_grid)

    ws = _XiWorkspace(fit, data, cfg.m)
    xi_b = ws.draw_batch(cfg.seed, range(1, cfg.B + 1))
    t1_b = _t1_grid(fit, j, a_mat, sb_mat, xi_b)
    h_hat = np.std(t1_b, axis=2, ddof=1)
    if np.any(h_hat <= 0.0):
        it, ix = np.argwhere(h_hat <= 0.0)[0]
        raise DegenerateVarianceError(
            f"bootstrap s.t.d. degenerate at grid point (t={t_grid[it]:.4f}, "
            f"x={x_grid[ix]:.4g})"
        )

    xi_m = ws.draw_batch(cfg.seed, range(cfg.B + 1, cfg.B + cfg.M + 1))
    t1_m = _t1_grid(fit, j, a_mat, sb_mat, xi_m)
    sup_draws = np.max(np.abs(t1_m) / h_hat[:, :, None], axis=(0, 1))
    c_alpha = _order_statistic(sup_draws, cfg.alpha)

    m_hat = estimate.predict_surface(fit, j, t_grid, x_grid)
    half = c_alpha * h_hat / math.sqrt(fit.n)
    return ScrResult(
        t_grid=t_grid,
        y_grid=y_grid,
        x_grid=x_grid,
        m_hat=m_hat,
        h_hat=h_hat,
        c_alpha_hat=c_alpha,
        lower=m_hat - half,
        upper=m_hat + half,
        alpha=cfg.alpha,
        j=j,
        sup_draws=np.sort(sup_draws),
    )


def compute_B_matrix(spec):
    """Gram matrix of the tensor basis over the unit square, as a p x p block.

    B = int b~ b~' dt dy by 64 x 64 tensor Gauss-Legendre quadrature (the
    tensor product factorises into the two 1-D Gram matrices).  Families
    that are orthonormal on [0, 1] give the identity; when the numerical
    deviation is below 1e-8 the result is snapped to the exact identity.
    """
    if spec.weighted_space:
        raise ConfigError("B matrix is defined for the unweighted space basis")
    nodes, weights = gauss_legendre_01(QUAD_NODES)
    a_time = bases.unit_basis_matrix(spec.time_family, spec.c, nodes)
    a_space = bases.unit_basis_matrix(spec.space_family, spec.d, nodes)
    gram_t = a_time.T @ (weights[:, None] * a_time)
    gram_s = a_space.T @ (weights[:, None] * a_space)
    b0 = np.kron(gram_t, gram_s)
    b_full = np.kron(np.eye(spec.r), b0)
    b_full = 0.5 * (b_full + b_full.T)
    if np.max(np.abs(b_full - np.eye(spec.p))) < 1e-8:
        return np.eye(spec.p)
    return b_full


def _quad_grid(spec):
    nodes, weights = gauss_legendre_01(QUAD_NODES)
    x_nodes = np.asarray(bases.map_from_unit(spec.mapping, nodes))
    return nodes, weights, x_nodes


def _surface_on(fn, t_nodes, x_nodes):
    tt, xx = np.meshgrid(t_nodes, x_nodes, indexing="ij")
    return np.vectorize(fn, otypes=[float])(tt, xx)


def _t2_statistic(fit, j, m0):
    """n * integral of (m_hat_j - m0)^2 over the unit square in (t, y)."""
    spec = fit.spec
    t_nodes, weights, x_nodes = _quad_grid(spec)
    diff = estimate.predict_surface(fit, j, t_nodes, x_nodes) - _surface_on(
        m0, t_nodes, x_nodes
    )
    return fit.n * float(weights @ diff**2 @ weights)


def _t2_draws(fit, data, cfg, js):
    """Quadratic-form null draws Xi' W_j Xi summed over the given js."""
    ws = _XiWorkspace(fit, data, cfg.m)
    xi = ws.draw_batch(cfg.seed, range(1, cfg.B + 1))
    v = fit.pi_solve(xi)  # (p, B)
    b_mat = compute_B_matrix(fit.spec)
    cd = fit.spec.c * fit.spec.d
    total = np.zeros(cfg.B)
    for j in js:
        vb = v[(j - 1) * cd : j * cd]
        b0 = b_mat[(j - 1) * cd : j * cd, (j - 1) * cd : j * cd]
        total += np.einsum("ik,ik->k", vb, b0 @ vb)
    return total


def _algorithm2_result(kind, statistic, draws, alpha):
    critical = _order_statistic(draws, alpha)
    return TestResult(
        kind=kind,
        statistic=float(statistic),
        null_draws_count=draws.size,
        p_value=_p_value(draws, statistic),
        reject_at_alpha=bool(statistic > critical),
        alpha=alpha,
    )


def test_exact_form(fit, data, cfg, j, m0):
    """L2 test of H0: m_j == m0 for a pre-specified surface m0(t, x)."""
    statistic = _t2_statistic(fit, j, m0)
    draws = _t2_draws(fit, data, cfg, [j])
    return _algorithm2_result("exact_form", statistic, draws, cfg.alpha)


def test_exact_form_joint(fit, data, cfg, m0_list):
    """Joint L2 test of H0: m_j == m0_j for all j simultaneously."""
    if len(m0_list) != fit.spec.r:
        raise ConfigError("need one null surface per regression function")
    statistic = sum(_t2_statistic(fit, j + 1, m0) for j, m0 in enumerate(m0_list))
    draws = _t2_draws(fit, data, cfg, range(1, fit.spec.r + 1))
    return _algorithm2_result("exact_form_joint", statistic, draws, cfg.alpha)


def _restricted_time_constant(fit, data, j):
    """Refit with function j forced to be time-invariant; its surface on x."""
    spec = fit.spec
    design, y = estimate.build_design(data, spec)
    w = estimate.regressor_matrix(data, spec)
    cd, d = spec.c * spec.d, spec.d
    keep = np.ones(spec.p, dtype=bool)
    keep[(j - 1) * cd : j * cd] = False
    restricted = np.hstack([design[:, keep], w[:, (j - 1) * d : j * d]])
    rfit = estimate.ols_fit(restricted, y, spec=spec, n=fit.n)
    gamma = rfit.beta_hat[-d:]
    return lambda sb_mat, t_count: np.tile(sb_mat @ gamma, (t_count, 1))


def _embedding_test(kind, fit, data, cfg, j, restricted_on_grid):
    """Reject when the restricted surface exits the full-model region.

    The p-value is the smallest alpha at which rejection occurs, read
    off the sup-draw distribution behind the region.
    """
    region = scr(fit, data, cfg, j)
    a_count = region.t_grid.size
    sb_mat = bases.space_basis_matrix(fit.spec, region.x_grid)
    rest = restricted_on_grid(sb_mat, a_count)
    statistic = float(
        np.max(np.abs(rest - region.m_hat) / region.h_hat) * math.sqrt(fit.n)
    )
    return TestResult(
        kind=kind,
        statistic=statistic,
        null_draws_count=region.sup_draws.size,
        p_value=_p_value(region.sup_draws, statistic),
        reject_at_alpha=bool(statistic > region.c_alpha_hat),
        alpha=cfg.alpha,
    )


def test_stationarity(fit, data, cfg, j=1):
    """Structural test of H0: m_j(t, x) does not depend on t."""
    return _embedding_test(
        "stationarity", fit, data, cfg, j, _restricted_time_constant(fit, data, j)
    )


def test_separability(fit, data, cfg, j=1):
    """Structural test of H0: m_j(t, x) = f(t) g(x).

    The restricted surface is the best rank-one approximation (truncated
    SVD) of the (c, d) coefficient block, pushed back through the basis.
    """
    coef = fit.coefficient_block(j)
    u, s, vt = np.linalg.svd(coef, full_matrices=False)
    rank1 = s[0] * np.outer(u[:, 0], vt[0])

    def restricted(sb_mat, t_count):
        a_mat = bases.time_basis_matrix(fit.spec, _midpoint_grid(cfg.grid_t))
        return a_mat @ rank1 @ sb_mat.T

    return _embedding_test("separability", fit, data, cfg, j, restricted)
