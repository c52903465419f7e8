"""Exception hierarchy shared by every pdda module.

Each class carries the CLI exit code it maps to.
"""


class PDDAError(Exception):
    """Base class for all pdda errors."""

    exit_code = 1


class ParameterError(PDDAError, ValueError):
    """An argument violates a documented invariant (bad H, rho, lag, ...)."""

    exit_code = 2


class DataError(PDDAError, ValueError):
    """Input data is unusable (non-finite values, constant columns, ...)."""

    exit_code = 3


class SizeError(ParameterError):
    """A dense computation was requested on an input that is too large."""


class EstimationError(PDDAError, RuntimeError):
    """A scaling quantity or regression could not be computed."""

    exit_code = 4


class FitError(EstimationError):
    """Too few usable points for a log-log regression."""
