"""Exception hierarchy for alphanorm.

Every error raised by the library derives from :class:`AlphanormError`, so
callers (the CLI in particular) can map library failures to a single exit
path without matching on builtins.
"""

from __future__ import annotations

__all__ = [
    "AlphanormError",
    "DomainError",
    "UnsupportedParameterError",
    "SingularPointError",
    "DimensionError",
    "BracketError",
    "QuadratureError",
    "ResourceLimitError",
    "MatrixValidationError",
]


class AlphanormError(Exception):
    """Base class for all library errors."""


class DomainError(AlphanormError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedParameterError(AlphanormError, ValueError):
    """The operation is only defined for a restricted parameter set.

    Raised instead of silently extending a formula beyond where it is known
    to hold (for example the shape and entropy results, stated for the unit
    scale only).
    """


class SingularPointError(AlphanormError, ValueError):
    """Evaluation was requested exactly at a singular point of a density."""


class DimensionError(AlphanormError, ValueError):
    """Vector or matrix dimensions do not agree."""


class BracketError(AlphanormError, ValueError):
    """A root-finding bracket does not change sign."""


class QuadratureError(AlphanormError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate so callers can inspect how far the
    integration got before giving up.
    """

    def __init__(self, message: str, value: float, error_estimate: float):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class ResourceLimitError(AlphanormError, ValueError):
    """The request exceeds a documented resource cap (e.g. 2**d enumeration)."""


class MatrixValidationError(AlphanormError, ValueError):
    """A correlation matrix violates its invariants."""
