"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
NumericalError -> 3.
"""


class SieveLabError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(SieveLabError):
    """Invalid configuration: bad parameter values, inconsistent specs."""

    exit_code = 1


class DataError(SieveLabError):
    """Problems with input data (non-finite values, malformed files)."""

    exit_code = 2


class DomainError(DataError):
    """A point lies outside the domain of a mapping or basis function."""


class NumericalError(SieveLabError):
    """Numerical failure during computation."""

    exit_code = 3


class SingularDesignError(NumericalError):
    """Design matrix is numerically rank deficient."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class DegenerateVarianceError(NumericalError):
    """A bootstrap standard deviation collapsed to zero."""
