"""Lattice functions, multilinear spherical averages, maximal operator, norms."""

from __future__ import annotations

from .average import (
    AverageResult,
    MaximalResult,
    maximal_operator,
    multilinear_average,
    multilinear_average_direct,
    shell_convolve,
)
from .box import all_boxes, box_maximal_norm
from .functions import LatticeFunction, max_abs_difference
from .norms import lp_norm, maximal_norm, norm_ratio

__all__ = [
    "AverageResult",
    "LatticeFunction",
    "MaximalResult",
    "all_boxes",
    "box_maximal_norm",
    "lp_norm",
    "max_abs_difference",
    "maximal_norm",
    "maximal_operator",
    "multilinear_average",
    "multilinear_average_direct",
    "norm_ratio",
    "shell_convolve",
]
