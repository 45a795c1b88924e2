"""Discrete multilinear spherical averages on Z^d and their circle-method decomposition."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    BisphereError,
    CountOverflowError,
    DomainError,
    GuardExceededError,
    QuadratureError,
    TableRangeError,
    UndefinedAverageError,
)
from .lattice import RepresentationTable, build_representation_table, count_N, regularity_ratio, sphere_points

__all__ = [
    "BisphereError", "CountOverflowError", "DomainError", "GuardExceededError",
    "QuadratureError", "RepresentationTable", "TableRangeError", "UndefinedAverageError",
    "__version__", "build_representation_table", "count_N", "regularity_ratio", "sphere_points",
]
