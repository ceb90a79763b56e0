"""Data-driven choice of the sieve orders (c, d) and the block size m.

(c, d) minimise the one-step-ahead forecast MSE over a held-out tail of
the series; m minimises the volatility of the block-sum long-run
covariance estimate over a neighbourhood of candidate sizes.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import estimate
from .errors import ConfigError, SieveLabError
from .inference import _XiWorkspace


def default_validation_length(n):
    return int(math.floor(3 * math.log2(n)))


def default_cd_candidates(n):
    hi = max(2, math.ceil(2.0 * math.log(n)))
    return list(range(2, hi + 1))


def default_m_candidates(n):
    return list(range(2, math.ceil(3.0 * n ** (1.0 / 3.0)) + 1))


@dataclass(frozen=True)
class TuneGrid:
    """Candidate sets for the order and block-size searches."""

    c_candidates: tuple
    d_candidates: tuple
    l: int
    m_candidates: tuple
    h0: int = 3

    def __post_init__(self):
        for name in ("c_candidates", "d_candidates", "m_candidates"):
            vals = getattr(self, name)
            if len(vals) == 0:
                raise ConfigError(f"{name} must be nonempty")
            if list(vals) != sorted(vals):
                raise ConfigError(f"{name} must be sorted ascending")
        if self.l < 1:
            raise ConfigError("validation length l must be >= 1")
        if self.h0 < 1:
            raise ConfigError("h0 must be >= 1")

    @classmethod
    def for_n(cls, n, c_candidates=None, d_candidates=None, l=None, m_candidates=None, h0=3):
        cd = default_cd_candidates(n)
        return cls(
            c_candidates=tuple(c_candidates if c_candidates is not None else cd),
            d_candidates=tuple(d_candidates if d_candidates is not None else cd),
            l=l if l is not None else default_validation_length(n),
            m_candidates=tuple(
                m_candidates if m_candidates is not None else default_m_candidates(n)
            ),
            h0=h0,
        )


def validation_mse_table(data, spec_template, grid):
    """Forecast MSE of every (c, d) candidate on the held-out tail.

    The model is fitted on the first n - l observations; the last l are
    forecast one step ahead using observed lagged values.  Candidates
    whose fit fails are recorded with the error message instead of a
    number.
    """
    arr = np.asarray(data, dtype=float)
    n = arr.shape[0]
    l = grid.l
    if l >= n // 2:
        raise ConfigError(f"validation length l={l} too large for n={n}")
    r = spec_template.r
    train = arr[: n - l]
    resolved = estimate.resolve_spec(train, spec_template)

    table, failures = {}, {}
    for c in grid.c_candidates:
        for d in grid.d_candidates:
            spec = resolved.with_orders(c, d)
            try:
                spec.time_family.check_count(c)
                spec.space_family.check_count(d)
                design, y = estimate.build_design(arr, spec)
                split = n - l - r
                if split < spec.p:
                    raise ConfigError(
                        f"training part under-determined for (c={c}, d={d})"
                    )
                fit = estimate.ols_fit(design[:split], y[:split], spec=spec, n=n - l)
                forecast = design[split:] @ fit.beta_hat
                table[(c, d)] = float(np.mean((y[split:] - forecast) ** 2))
            except SieveLabError as exc:
                failures[(c, d)] = str(exc)
    if not table:
        detail = "; ".join(f"(c={c},d={d}): {msg}" for (c, d), msg in failures.items())
        raise ConfigError(f"all (c, d) candidates failed: {detail}")
    return table, failures


def select_cd(data, spec_template, grid=None):
    """The candidate pair with minimum validation MSE.

    Ties break toward smaller p = r c d, then smaller c.
    """
    if grid is None:
        grid = TuneGrid.for_n(np.asarray(data).shape[0])
    table, _ = validation_mse_table(data, spec_template, grid)
    r = spec_template.r

    def sort_key(item):
        (c, d), mse = item
        return (mse, r * c * d, c)

    (c, d), _ = min(table.items(), key=sort_key)
    if c == max(grid.c_candidates) or d == max(grid.d_candidates):
        warnings.warn(
            f"selected orders (c={c}, d={d}) lie on the candidate-grid edge; "
            "consider enlarging the grid",
            stacklevel=2,
        )
    return c, d


def omega_hat(fit, data, m):
    """Block-sum long-run covariance estimate of the bootstrap vector.

    Omega_hat = (1 / ((n-m-r+1) m)) sum_i [S_i kron a(t_i)][...]'
    with S_i the sliding residual-weighted block sums.
    """
    ws = _XiWorkspace(fit, data, m)
    n, r = fit.n, fit.spec.r
    omega = ws.y.T @ ws.y / ((n - m - r + 1) * m)
    return 0.5 * (omega + omega.T)


def se_table(fit, data, grid=None):
    """Volatility se(m) of omega_hat over the interior candidate range.

    For each interior m the Frobenius deviation of omega_hat around its
    neighbourhood mean is computed over m +- h0 (truncated at the ends
    of the valid range, where it coincides with the usual formula once
    the full window is available).
    """
    if grid is None:
        grid = TuneGrid.for_n(fit.n)
    interior = list(grid.m_candidates)
    h0 = grid.h0
    n, r = fit.n, fit.spec.r
    m_max_valid = n - r - 1
    lo = max(1, interior[0] - h0)
    hi = min(m_max_valid, interior[-1] + h0)
    if interior[-1] > m_max_valid:
        raise ConfigError("m candidates exceed n - r - 1")
    omegas = {m: omega_hat(fit, data, m) for m in range(lo, hi + 1)}

    table = {}
    for m in interior:
        neigh = [omegas[k] for k in range(m - h0, m + h0 + 1) if lo <= k <= hi]
        mean = sum(neigh) / len(neigh)
        sq = sum(float(np.linalg.norm(mean - om, "fro") ** 2) for om in neigh)
        denom = max(len(neigh) - 1, 1)
        table[m] = math.sqrt(sq / denom)
    return table


def select_m(fit, data, grid=None):
    """Block size with minimum volatility; ties break toward smaller m."""
    table = se_table(fit, data, grid)
    m_best = min(table.items(), key=lambda kv: (kv[1], kv[0]))[0]
    interior = sorted(table)
    if m_best in (interior[0], interior[-1]) and len(interior) > 1:
        warnings.warn(
            f"selected block size m={m_best} lies on the candidate-range edge",
            stacklevel=2,
        )
    return m_best
