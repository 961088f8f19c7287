# Structured error handling for setcalc

from typing import Any, Dict, Optional

# Error categories for structured reports
ERROR_INVALID_INPUT = "INVALID_INPUT"
ERROR_DOMAIN = "DOMAIN"
ERROR_HYPOTHESIS = "HYPOTHESIS"
ERROR_CONVERGENCE = "CONVERGENCE"
ERROR_CONFIG = "CONFIG"
ERROR_CATALOG = "CATALOG"

# Process exit codes used by the CLI
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_UNKNOWN_FUNCTION = 2
EXIT_BAD_CONFIG = 3
EXIT_NOT_CONVERGED = 4


class SetcalcError(Exception):
    """Base exception for setcalc errors with structured report support."""

    code = ERROR_INVALID_INPUT
    exit_code = EXIT_FAILURE

    def __init__(self, message: str, subcode: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.subcode = subcode or _subcode_for(type(self))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to structured error report format."""
        return {
            "code": self.code,
            "subcode": self.subcode,
            "message": self.message,
        }


def _subcode_for(cls: type) -> str:
    # InvalidGrid -> INVALID_GRID
    name = cls.__name__
    out = []
    for i, ch in enumerate(name):
        if ch.isupper() and i and not name[i - 1].isupper():
            out.append("_")
        out.append(ch.upper())
    return "".join(out)


# Input validation

class InvalidGrid(SetcalcError):
    """Raised when grid fields violate a < b, n >= 2."""


class InvalidSample(SetcalcError):
    """Raised when sample values, jumps or Lipschitz metadata are inconsistent."""


class GridMismatch(SetcalcError):
    """Raised when two operands live on different grids."""


class DimensionMismatch(SetcalcError):
    """Raised when vector classes or directions disagree in dimension."""


class NonpositiveK(SetcalcError):
    """Raised when a Lipschitz modulus k <= 0 is requested."""


class InvalidSchedule(SetcalcError):
    """Raised when a k-schedule or smoothing schedule is malformed."""


class HasJumps(SetcalcError):
    """Raised when a graph metric is asked for a function with jumps."""


class ExpressionError(SetcalcError):
    """Raised when an algebra expression cannot be parsed."""

    code = ERROR_CATALOG
    exit_code = EXIT_UNKNOWN_FUNCTION


# Domain errors

class OutOfDomain(SetcalcError):
    """Raised when an evaluation point lies outside [a, b]."""

    code = ERROR_DOMAIN


class RepresentativeInconsistent(SetcalcError):
    """Raised when lower/upper representatives fail the hull relation."""

    code = ERROR_DOMAIN


class NotLipschitz(SetcalcError):
    """Raised when a Lipschitz function is required but a value jump is present."""

    code = ERROR_DOMAIN


class RangeMismatch(SetcalcError):
    """Raised when the range of f leaves the domain of an outer function."""

    code = ERROR_DOMAIN


class NotInTower(SetcalcError):
    """Raised when an element belongs to no level of a tower."""

    code = ERROR_DOMAIN


class DepthMismatch(SetcalcError):
    """Raised when tower elements of different depths cannot be aligned."""

    code = ERROR_DOMAIN


# Hypothesis checks

class HypothesisViolated(SetcalcError):
    """Raised when a premise of a checked statement fails."""

    code = ERROR_HYPOTHESIS


class NotAnExtremum(SetcalcError):
    """Raised when a stationarity check is asked at a non-extremal point."""

    code = ERROR_HYPOTHESIS


class NotAContinuityPoint(SetcalcError):
    """Raised when a gradient is not single-valued at the requested point."""

    code = ERROR_HYPOTHESIS


# Convergence

class NotConverged(SetcalcError):
    """Raised when a smoothing schedule does not produce a Cauchy gradient sequence.

    The closure diagnostic is attached so callers can still report it.
    """

    code = ERROR_CONVERGENCE
    exit_code = EXIT_NOT_CONVERGED

    def __init__(self, message: str, diagnostic: Any = None, subcode: Optional[str] = None):
        super().__init__(message, subcode=subcode)
        self.diagnostic = diagnostic

    def to_dict(self) -> Dict[str, Any]:
        out = super().to_dict()
        if self.diagnostic is not None and hasattr(self.diagnostic, "to_dict"):
            out["diagnostic"] = self.diagnostic.to_dict()
        return out


class ScheduleTooCoarse(NotConverged):
    """Raised when stage gaps are non-monotone from the first stage."""


class NotCauchy(SetcalcError):
    """Raised when a tower sequence fails the Cauchy test."""

    code = ERROR_CONVERGENCE


class PrecisionUnreachable(SetcalcError):
    """Raised when a requested precision is below the instantiation's floor."""

    code = ERROR_CONVERGENCE


# Configuration and catalog

class BadConfig(SetcalcError):
    """Raised when configuration values are missing or malformed."""

    code = ERROR_CONFIG
    exit_code = EXIT_BAD_CONFIG


class UnknownFunction(SetcalcError):
    """Raised when a catalog name is not recognized."""

    code = ERROR_CATALOG
    exit_code = EXIT_UNKNOWN_FUNCTION


def error_response(code: str, subcode: str, message: str) -> Dict[str, str]:
    """Create a structured error report dictionary.

    All error reports follow the format:
    {
        "code": "...",
        "subcode": "...",
        "message": "..."
    }
    """
    return {
        "code": code,
        "subcode": subcode,
        "message": message,
    }
