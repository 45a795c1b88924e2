"""Exponential sums, arcs, Gauss sums, bumps, Bessel factors and major-arc multipliers."""

from __future__ import annotations

from .arcs import ArcSet, FareyArc, all_arcsets_disjoint, farey_major_arcs, farey_sequence
from .bessel import bessel_j, sphere_constant, sphere_ft
from .bump import Cutoff, plateau
from .gauss import degenerate_sum, gauss_layer_series, gauss_sum, gauss_sum_1d, reduced_residues, totients
from .minor import MinorArcIntegral, minor_arc_integral
from .oscillatory import box_phase_ft
from .symbols import (
    multiplier_A,
    multiplier_B,
    multiplier_M,
    multiplier_M_term,
    sigma_hat_exact,
    singular_integral,
)
from .weyl import generating_product, sup_over_xi, weyl_sum

__all__ = [
    "ArcSet", "Cutoff", "FareyArc", "MinorArcIntegral",
    "all_arcsets_disjoint", "bessel_j", "box_phase_ft", "degenerate_sum",
    "farey_major_arcs", "farey_sequence", "gauss_layer_series", "gauss_sum",
    "gauss_sum_1d", "generating_product", "minor_arc_integral", "multiplier_A",
    "multiplier_B", "multiplier_M", "multiplier_M_term", "plateau",
    "reduced_residues", "sigma_hat_exact", "singular_integral", "sphere_constant",
    "sphere_ft", "sup_over_xi", "totients", "weyl_sum",
]
