"""l^p norms of lattice functions and the empirical Hölder ratio."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from .functions import LatticeFunction


def _check_p(p: float) -> float:
    p = float(p)
    if not p >= 1:
        raise DomainError(f"need p >= 1 (or inf), got {p}")
    return p


def lp_norm(f: LatticeFunction, p: float) -> float:
    """(sum |f|^p)^{1/p}, or max |f| for p = inf.

    Boxes use the closed form |c| L^{d/p}.  A nonzero constant only has a
    finite sup norm.
    """
    p = _check_p(p)
    if f.kind == "constant":
        if math.isinf(p) or f.scale == 0:
            return abs(f.scale)
        raise DomainError("a nonzero constant has infinite l^p norm for p < inf")
    if f.kind == "box":
        if math.isinf(p):
            return abs(f.scale)
        return abs(f.scale) * float(f.side) ** (f.dim / p)
    v = np.abs(f.values)
    if v.size == 0:
        return 0.0
    if math.isinf(p):
        return float(v.max())
    # factor out the max so large p does not overflow
    m = v.max()
    return float(m * np.sum((v / m) ** p) ** (1.0 / p))


def maximal_norm(fs, lambdas, r: float) -> float:
    """||T*(fs)||_r over the finite lambda set."""
    from .average import maximal_operator
    from .box import all_boxes, box_maximal_norm

    fs = list(fs)
    r = _check_p(r)
    if all_boxes(fs):
        return box_maximal_norm(fs, lambdas, r)
    return lp_norm(maximal_operator(fs, lambdas).values, r)


def norm_ratio(fs, p_list, r: float, lambdas) -> float:
    """||T*(fs)||_r / prod_i ||f_i||_{p_i}."""
    fs = list(fs)
    if len(p_list) != len(fs):
        raise DomainError(f"need one exponent per slot, got {len(p_list)} for {len(fs)}")
    denom = 1.0
    for f, p in zip(fs, p_list):
        denom *= lp_norm(f, p)
    if denom == 0:
        raise ZeroDivisionError("an input has zero norm")
    return maximal_norm(fs, lambdas, r) / denom
