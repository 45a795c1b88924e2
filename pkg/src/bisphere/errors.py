"""Exception hierarchy.

Every failure mode that the command line maps to its own exit code has a
class here, so callers can catch by category rather than by message.
"""

from __future__ import annotations


class BisphereError(Exception):
    """Base class for all package errors."""


class DomainError(BisphereError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class TableRangeError(BisphereError, IndexError):
    """A representation table was queried beyond its lambda_max."""


class CountOverflowError(BisphereError, OverflowError):
    """A lattice count would exceed the 64-bit integer range."""


class UndefinedAverageError(DomainError):
    """The sphere is empty (N(lambda) = 0), so the average is undefined."""


class QuadratureError(BisphereError, ArithmeticError):
    """Adaptive quadrature failed to reach its tolerance."""

    def __init__(self, message: str, *, estimate=None, error=None, levels=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.levels = levels


class GuardExceededError(BisphereError, RuntimeError):
    """A brute-force enumeration would exceed its configured size guard."""
