"""Generators for locally stationary error processes and regression models.

All recursions start from zero, run ``burn_in`` extra steps with the
rescaled time argument frozen at t = 0, and return the last n values,
whose time arguments are i/n for i = 1..n.  Randomness comes from a
counter-based stream keyed by the seed, so outputs are bitwise
reproducible regardless of call order or worker count.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._streams import stream, substream_seed
from .errors import ConfigError, NumericalError

DEFAULT_BURN_IN = 1000

CoefFn = Callable[[np.ndarray], np.ndarray]


def _a1_default(t):
    return 0.4 * np.ones_like(t)


def _a2_default(t):
    return 0.4 * np.sin(2.0 * math.pi * t)


@dataclass(frozen=True)
class ErrorProcessSpec:
    """A locally stationary noise recursion.

    kind:
      tvar2     e_i = a1(t) e_{i-1} + a2(t) e_{i-2} + eta_i
      setar     e_i = a1(t) e_{i-1} + eta_i  if e_{i-1} >= 0, else a2 branch
      bilinear  e_i = (a1(t) eta_{i-1} + a2(t)) e_{i-1} + eta_i
      tvtar     e_i = a(t) max(e_{i-1}, 0) + b(t) max(-e_{i-1}, 0) + eta_i

    Coefficient functions take rescaled time in [0, 1] (vectorised);
    innovations are i.i.d. standard Gaussian.  For tvtar the contraction
    sup_t |a(t)| + |b(t)| < 1 is checked on a 1024-point grid.
    """

    kind: str
    a1: CoefFn = field(default=_a1_default)
    a2: CoefFn = field(default=_a2_default)
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        if self.kind not in ("tvar2", "setar", "bilinear", "tvtar"):
            raise ConfigError(f"unknown error process {self.kind!r}")
        if self.burn_in < 0:
            raise ConfigError("burn_in must be >= 0")
        if self.kind == "tvtar":
            grid = np.linspace(0.0, 1.0, 1024)
            total = np.abs(np.asarray(self.a1(grid))) + np.abs(np.asarray(self.a2(grid)))
            if total.max() >= 1.0:
                raise ConfigError(
                    "tvtar contraction violated: sup |a(t)| + |b(t)| must be < 1"
                )


def error_process(kind, a1=None, a2=None, burn_in=DEFAULT_BURN_IN):
    kwargs = {}
    if a1 is not None:
        kwargs["a1"] = a1
    if a2 is not None:
        kwargs["a2"] = a2
    return ErrorProcessSpec(kind, burn_in=burn_in, **kwargs)


# the three error models of the Monte Carlo study share one coefficient
# pair: a1(t) = 0.4, a2(t) = 0.4 sin(2 pi t)
ERROR_PRESETS = {
    "a": lambda: error_process("tvar2"),
    "b": lambda: error_process("setar"),
    "c": lambda: error_process("bilinear"),
}


def error_step(kind, a1, a2, prev, prev2, prev_eta, eta):
    """One step of the noise recursion given current coefficient values.

    The SETAR regime boundary follows the convention that prev >= 0
    selects the first regime.
    """
    if kind == "tvar2":
        return a1 * prev + a2 * prev2 + eta
    if kind == "setar":
        return (a1 if prev >= 0.0 else a2) * prev + eta
    if kind == "bilinear":
        return (a1 * prev_eta + a2) * prev + eta
    # tvtar
    return a1 * max(prev, 0.0) + a2 * max(-prev, 0.0) + eta


def _run_error_recursion(spec, n, seed, burn_in):
    """Full path of length burn_in + n; burn-in steps use t = 0."""
    total = burn_in + n
    rng = stream(seed, "error", spec.kind)
    eta = rng.standard_normal(total)
    t = np.empty(total)
    t[:burn_in] = 0.0
    t[burn_in:] = np.arange(1, n + 1) / n
    a1 = np.broadcast_to(np.asarray(spec.a1(t), dtype=float), (total,))
    a2 = np.broadcast_to(np.asarray(spec.a2(t), dtype=float), (total,))

    eps = np.zeros(total)
    prev = prev2 = prev_eta = 0.0
    kind = spec.kind
    for i in range(total):
        cur = error_step(kind, a1[i], a2[i], prev, prev2, prev_eta, eta[i])
        eps[i] = cur
        prev2, prev, prev_eta = prev, cur, eta[i]
    return eps


def gen_error_process(spec, n, seed):
    """Simulate n values of the error process; deterministic given seed."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    return _run_error_recursion(spec, n, seed, spec.burn_in)[spec.burn_in :]


@dataclass(frozen=True)
class RegressionModelSpec:
    """Conditional mean m(t, x) and noise scale sigma(t, x) >= 0."""

    m: Callable[[float, float], float]
    sigma: Callable[[float, float], float]
    name: str = "custom"
    delta: float = 0.0

    def validate(self):
        tt, xx = np.meshgrid(np.linspace(0, 1, 128), np.linspace(-4, 4, 128))
        sig = np.vectorize(self.sigma)(tt, xx)
        if np.any(sig < 0):
            raise ConfigError("sigma(t, x) must be nonnegative")
        return self


def model1():
    return RegressionModelSpec(
        m=lambda t, x: 5.0 * t + 4.0 * np.cos(2.0 * math.pi * t * x),
        sigma=lambda t, x: 1.5 * np.exp(-0.5 * x**2) * (2.0 + np.sin(2.0 * math.pi * t)),
        name="model1",
    )


def model2(delta=0.0):
    if not 0.0 <= delta <= 1.0:
        raise ConfigError("delta must lie in [0, 1]")
    return RegressionModelSpec(
        m=lambda t, x: (delta * np.sin(2.0 * math.pi * t) + 1.0) * np.exp(-0.5 * x**2),
        sigma=lambda t, x: 1.5
        * np.exp(x)
        / (1.0 + np.exp(x))
        * (0.5 * np.cos(2.0 * math.pi * t * x) + 1.0),
        name="model2",
        delta=delta,
    )


def _sigma3(t, x):
    if abs(x) <= 1.0:
        return 0.7 * (1.0 + x**2)
    return 1.4 if t < 0.5 else 2.0


def model3(delta=0.0):
    if not 0.0 <= delta <= 1.0:
        raise ConfigError("delta must lie in [0, 1]")
    return RegressionModelSpec(
        m=lambda t, x: 4.0
        * t
        * (delta * np.cos(2.0 * math.pi * t * x) - 0.5 * np.exp(-0.5 * x**2)),
        sigma=_sigma3,
        name="model3",
        delta=delta,
    )


MODEL_PRESETS = {"model1": model1, "model2": model2, "model3": model3}


def builtin_model(name, delta=0.0):
    if name not in MODEL_PRESETS:
        raise ConfigError(f"unknown builtin model {name!r}")
    return model1() if name == "model1" else MODEL_PRESETS[name](delta)


def gen_regression_series(model, errors, burn_in=0):
    """Drive X_i = m(t_i, X_{i-1}) + sigma(t_i, X_{i-1}) e_i from X_0 = 0.

    ``errors`` holds burn_in + n innovations; the first burn_in steps run
    with t frozen at 0 and are dropped, the remaining n use t = i/n.
    """
    errors = np.asarray(errors, dtype=float)
    if errors.size == 0:
        raise ConfigError("errors must be nonempty")
    if not 0 <= burn_in < errors.size:
        raise ConfigError("burn_in must leave at least one observation")
    n = errors.size - burn_in
    out = np.empty(errors.size)
    prev = 0.0
    for i in range(errors.size):
        t = 0.0 if i < burn_in else (i - burn_in + 1) / n
        cur = model.m(t, prev) + model.sigma(t, prev) * errors[i]
        if not np.isfinite(cur):
            raise NumericalError(f"series diverged at step {i + 1}")
        out[i] = cur
        prev = cur
    return out[burn_in:]


def simulate_model(model, error_spec, n, seed, burn_in=None):
    """Error process plus regression recursion with a shared burn-in."""
    if burn_in is None:
        burn_in = error_spec.burn_in
    eps = _run_error_recursion(error_spec, n, seed, burn_in)
    return gen_regression_series(model, eps, burn_in=burn_in)


def gen_case2_panel(models, error_specs, n, seed):
    """Exogenous-predictor panel: columns (Y, X_1, ..., X_r).

    Covariates are independent error-process draws; the response is
    Y_i = sum_j m_j(t_i, X_{j,i}) + sigma_1(t_i, X_{1,i}) eps_i with
    eps_i a fresh error-process draw.
    """
    r = len(models)
    if r < 1 or len(error_specs) != r + 1:
        raise ConfigError("need r model specs and r+1 error specs (covariates + noise)")
    t = np.arange(1, n + 1) / n
    covs = np.column_stack(
        [
            gen_error_process(error_specs[j], n, substream_seed(seed, "cov", j))
            for j in range(r)
        ]
    )
    noise = gen_error_process(error_specs[r], n, substream_seed(seed, "noise"))
    y = noise * np.array([models[0].sigma(t[i], covs[i, 0]) for i in range(n)])
    for j, model in enumerate(models):
        y = y + np.array([model.m(t[i], covs[i, j]) for i in range(n)])
    if not np.all(np.isfinite(y)):
        raise NumericalError("panel response contains non-finite values")
    return np.column_stack([y, covs])
