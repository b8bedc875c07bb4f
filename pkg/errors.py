"""
Exception hierarchy for Compass.
Every error knows the exit status the CLI reports for it.
"""

from typing import Optional


class CompassError(Exception):
    """Base class for all Compass errors."""

    exit_code: int = 4


class UsageError(CompassError):
    """Inconsistent command-line usage."""

    exit_code = 2


class DataError(CompassError, ValueError):
    """Invalid input data. Carries the offending row when known."""

    exit_code = 3

    def __init__(self, message: str, row: Optional[int] = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class DomainError(CompassError, ValueError):
    """Argument outside the domain of a function or distribution."""

    exit_code = 4


class NumericalError(CompassError):
    """A numerical procedure failed."""

    exit_code = 4


class FitError(NumericalError):
    """Maximum likelihood fit failed (non-finite likelihood, broken line search)."""


class ReplicateFailureError(NumericalError):
    """A bootstrap or simulation replicate could not be fitted within the retry budget."""

    def __init__(self, replicate: int, attempts: int, cause: Optional[Exception] = None):
        super().__init__(
            f"replicate {replicate} failed after {attempts} attempts"
            + (f": {cause}" if cause else "")
        )
        self.replicate = replicate
        self.attempts = attempts


class SingularInformationError(NumericalError):
    """Observed information matrix cannot be inverted."""

    def __init__(self, condition: float):
        super().__init__(f"observed information is singular (condition number {condition:.3g})")
        self.condition = condition


class FitQualityError(NumericalError):
    """Likelihood-ratio statistic is negative, so one of the fits is not a maximum."""


class DegenerateSampleError(NumericalError):
    """Sample has zero variance; shape statistics are undefined."""
