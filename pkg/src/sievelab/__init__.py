"""Sieve estimation and multiplier-bootstrap inference for time-varying
nonlinear time series regression on unbounded covariate domains."""

from .bases import (
    BasisFamily,
    Mapping,
    SieveSpec,
    chebyshev1,
    daubechies,
    eval_space_basis,
    eval_tensor_basis,
    eval_time_basis,
    fourier,
    jacobi,
    legendre,
    map_from_unit,
    map_to_unit,
)
from .errors import (
    ConfigError,
    DataError,
    DegenerateVarianceError,
    DomainError,
    NumericalError,
    SieveLabError,
    SingularDesignError,
)
from .estimate import (
    FitResult,
    IndexMap,
    build_design,
    fit_series,
    ols_fit,
    predict_m,
    predict_surface,
    regressor_vector,
)
from .inference import (
    BootstrapConfig,
    ScrResult,
    TestResult,
    compute_B_matrix,
    draw_xi,
    scr,
    t1_draw,
    test_exact_form,
    test_exact_form_joint,
    test_separability,
    test_stationarity,
)
from .simulate import (
    ERROR_PRESETS,
    ErrorProcessSpec,
    RegressionModelSpec,
    builtin_model,
    error_process,
    gen_case2_panel,
    gen_error_process,
    gen_regression_series,
    model1,
    model2,
    model3,
    simulate_model,
)
from .tuning import TuneGrid, omega_hat, select_cd, select_m

__version__ = "0.1.0"
