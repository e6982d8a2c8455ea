"""
Atmomin - Errors
Exception hierarchy shared by the numerics modules and the CLI.
Each class carries a machine-readable reason code (used for masked sweep
cells) and the process exit code the CLI maps it to.
"""

from typing import Optional


class AtmominError(Exception):
    """Base class for every error raised by the library."""

    reason = "error"
    exit_code = 1


class ContractViolation(AtmominError, ValueError):
    """Caller broke a documented precondition (shapes, dims, factor counts)."""

    reason = "contract"
    exit_code = 2


class DomainError(AtmominError, ValueError):
    """Argument outside the mathematical domain of an operation."""

    reason = "domain"
    exit_code = 3


class SubcriticalError(DomainError):
    """Negative radicand in the local temperature profile."""

    reason = "subcritical-D"

    def __init__(self, message: str, r: Optional[float] = None, radicand: Optional[float] = None):
        super().__init__(message)
        self.r = r
        self.radicand = radicand


class PoleError(DomainError):
    """Evaluation at the x = 1 pole of the D_HH inversion."""

    reason = "pole"


class PreconditionError(DomainError):
    """State does not satisfy the preconditions of a measure."""

    reason = "precondition"


class SearchError(DomainError):
    """A bracketing or optimisation search found nothing to refine."""

    reason = "search"


class TruncationError(AtmominError):
    """Required Fock cutoff exceeds the configured cap."""

    reason = "cutoff-overflow"
    exit_code = 4

    def __init__(self, message: str, required: Optional[int] = None,
                 achievable_epsilon: Optional[float] = None):
        super().__init__(message)
        self.required = required
        self.achievable_epsilon = achievable_epsilon


class SizingError(AtmominError):
    """Composite dimension above the configured maximum."""

    reason = "sizing"
    exit_code = 4
