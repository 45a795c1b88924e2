"""l-linear spherical averages on Z^d and their truncated maximal function.

    T_lam(f_1..f_l)(x) = N_l(lam)^{-1} sum_{|u_1|^2+...+|u_l|^2 = lam} prod_i f_i(x - u_i)

The fast path splits the sphere into shells: with
``F_i(z, x) = sum_k (f_i * omega_k)(x) z^k`` the numerator is the z^lam
coefficient of prod_i F_i(z, x).  All lam <= lam_max come out of one
truncated product, which is what the maximal function needs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, GuardExceededError, UndefinedAverageError
from ..lattice import get_table, sphere_points
from .functions import LatticeFunction

__all__ = [
    "AverageResult",
    "MaximalResult",
    "shell_convolve",
    "multilinear_average",
    "multilinear_average_direct",
    "maximal_operator",
    "average_all",
]


@dataclass(frozen=True)
class AverageResult:
    values: LatticeFunction
    lam: int
    arity: int


@dataclass(frozen=True)
class MaximalResult:
    values: LatticeFunction
    argmax: np.ndarray  # lam attaining the max at each row of values.points
    lambdas: tuple[int, ...]  # effective range
    skipped: tuple[int, ...] = field(default=())  # lam with N_l(lam) = 0


def _check_slots(fs) -> int:
    if not fs:
        raise DomainError("need at least one function")
    d = fs[0].dim
    if any(f.dim != d for f in fs):
        raise DomainError("all functions must live on the same Z^d")
    return d


def shell_convolve(f: LatticeFunction, k: int) -> LatticeFunction:
    """(f * omega_k)(x) = sum_{|u|^2 = k} f(x - u), exactly."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    d = f.dim
    if f.kind == "constant":
        return LatticeFunction.constant(d, f.scale * get_table(d, k).count(k))
    g = f.materialize()
    sph = sphere_points(d, k)
    if sph.shape[0] == 0 or g.points.shape[0] == 0:
        return LatticeFunction.zero(d)
    pts = (g.points[None, :, :] + sph[:, None, :]).reshape(-1, d)
    vals = np.tile(g.values, sph.shape[0])
    return LatticeFunction.from_points(pts, vals, d)


# ------------------------------------------------------------------ shell path


def _grid(finite, d, lam_max):
    rho = math.isqrt(lam_max)
    lo = np.full(d, np.iinfo(np.int64).min // 4)
    hi = np.full(d, np.iinfo(np.int64).max // 4)
    for f in finite:
        flo, fhi = f.bounds()
        lo = np.maximum(lo, flo - rho)
        hi = np.minimum(hi, fhi + rho)
    return lo, hi


def _shell_stack(f: LatticeFunction, lam_max: int, lo, shape) -> np.ndarray:
    """Dense (lam_max+1, G) array of f * omega_k on the grid, k = 0..lam_max."""
    d = f.dim
    size = int(np.prod(shape))
    out = np.zeros((lam_max + 1, size))
    for k in range(lam_max + 1):
        sph = sphere_points(d, k)
        if sph.shape[0] == 0:
            continue
        tgt = (f.points[None, :, :] + sph[:, None, :]).reshape(-1, d) - lo
        ok = np.all((tgt >= 0) & (tgt < shape), axis=1)
        if not ok.any():
            continue
        idx = np.ravel_multi_index(tgt[ok].T, shape)
        w = np.tile(f.values, sph.shape[0])[ok]
        out[k] = np.bincount(idx, weights=w, minlength=size)
    return out


def _truncated_product(a: np.ndarray, b: np.ndarray, lam_max: int) -> np.ndarray:
    """Coefficients 0..lam_max of the product of two z-polynomials (pointwise in x)."""
    width = max(a.shape[1], b.shape[1])
    out = np.zeros((lam_max + 1, width))
    for k in range(lam_max + 1):
        if not np.any(a[k]):
            continue
        out[k:] += a[k] * b[: lam_max + 1 - k]
    return out


def average_all(fs, lam_max: int):
    """Numerators sum_{|u|^2 = lam} prod f_i(x - u_i) for every lam <= lam_max.

    Returns ``(points, numer)`` where ``numer`` has shape (lam_max+1, len(points)),
    or ``(None, coeffs)`` with a (lam_max+1,) array when every slot is constant.
    """
    d = _check_slots(fs)
    if lam_max < 0:
        raise DomainError("lambda must be >= 0")
    consts = [f for f in fs if f.kind == "constant"]
    finite = [f.materialize() for f in fs if f.kind != "constant"]
    rd = get_table(d, lam_max).counts[: lam_max + 1].astype(np.float64)
    poly = np.zeros((lam_max + 1, 1))
    poly[0, 0] = 1.0
    for f in consts:
        poly = _truncated_product(poly, (f.scale * rd)[:, None], lam_max)
    if not finite:
        return None, poly[:, 0]
    if any(f.points.shape[0] == 0 for f in finite):
        return np.zeros((0, d), np.int64), np.zeros((lam_max + 1, 0))
    lo, hi = _grid(finite, d, lam_max)
    if np.any(lo > hi):
        return np.zeros((0, d), np.int64), np.zeros((lam_max + 1, 0))
    shape = tuple((hi - lo + 1).tolist())
    for f in finite:
        poly = _truncated_product(poly, _shell_stack(f, lam_max, lo, shape), lam_max)
    axes = [np.arange(lo[i], hi[i] + 1) for i in range(d)]
    points = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    return points, poly


def _normalizer(d, l, lam):
    return get_table(l * d, lam).count(lam)


def multilinear_average(fs, lam: int) -> AverageResult:
    """T_lam(f_1, ..., f_l) through the shell decomposition."""
    from .box import all_boxes, box_average

    fs = list(fs)
    d = _check_slots(fs)
    l = len(fs)
    n = _normalizer(d, l, lam)
    if n == 0:
        raise UndefinedAverageError(f"N_{l}({lam}) = 0: no lattice points on this sphere")
    if all_boxes(fs):
        return AverageResult(box_average(fs, lam), lam, l)
    points, numer = average_all(fs, lam)
    if points is None:
        return AverageResult(LatticeFunction.constant(d, numer[lam] / n), lam, l)
    return AverageResult(LatticeFunction.from_points(points, numer[lam] / n, d), lam, l)


def maximal_operator(fs, lambdas) -> MaximalResult:
    """Pointwise max over lam in ``lambdas`` of |T_lam(fs)|.

    Radii with an empty sphere are skipped and reported in ``skipped``.
    """
    from .box import all_boxes, box_maximal

    fs = list(fs)
    d = _check_slots(fs)
    l = len(fs)
    lams = sorted(set(int(x) for x in lambdas))
    if not lams:
        raise DomainError("empty lambda range")
    if all_boxes(fs):
        return box_maximal(fs, lams)
    counts = {lam: _normalizer(d, l, lam) for lam in lams}
    live = [lam for lam in lams if counts[lam] > 0]
    skipped = tuple(lam for lam in lams if counts[lam] == 0)
    if not live:
        raise DomainError(f"every lambda in the range has an empty sphere: {lams}")
    points, numer = average_all(fs, max(live))
    idx = np.array(live)
    norm = np.array([counts[lam] for lam in live], dtype=np.float64)
    if points is None:
        vals = np.abs(numer[idx]) / norm
        j = int(np.argmax(vals))
        return MaximalResult(LatticeFunction.constant(d, vals[j]), np.array([live[j]]), tuple(live), skipped)
    vals = np.abs(numer[idx]) / norm[:, None]
    j = np.argmax(vals, axis=0)
    best = vals[j, np.arange(vals.shape[1])]
    keep = best != 0
    return MaximalResult(
        LatticeFunction.from_points(points[keep], best[keep], d), idx[j][keep], tuple(live), skipped
    )


# ---------------------------------------------------------------- direct oracle


@dataclass
class _SphereCounter:
    dim: int
    cache: dict = field(default_factory=dict)

    def __call__(self, m: int) -> int:
        if m < 0:
            return 0
        if m not in self.cache:
            self.cache[m] = sphere_points(self.dim, m).shape[0] if self.dim else int(m == 0)
        return self.cache[m]


def multilinear_average_direct(fs, lam: int, guard: int = 10**7) -> AverageResult:
    """Oracle: enumerate every tuple (u_1..u_l) with sum |u_i|^2 = lam that hits the supports.

    For finite slots u_i = x - s_i runs over support points s_i, so the
    enumeration is over tuples (s_1..s_m) and output points x, checking
    sum |x - s_i|^2 directly.  Constant slots contribute the number of
    lattice points on the remaining sphere, counted by listing them.
    ``guard`` caps (#tuples x #grid points).
    """
    fs = list(fs)
    d = _check_slots(fs)
    l = len(fs)
    n = get_table(l * d, lam).count(lam)
    if n == 0:
        raise UndefinedAverageError(f"N_{l}({lam}) = 0")
    consts = [f for f in fs if f.kind == "constant"]
    finite = [f.materialize() for f in fs if f.kind != "constant"]
    cscale = float(np.prod([f.scale for f in consts])) if consts else 1.0
    rest = _SphereCounter(len(consts) * d)
    if not finite:
        return AverageResult(LatticeFunction.constant(d, cscale * rest(lam) / n), lam, l)
    if any(f.points.shape[0] == 0 for f in finite):
        return AverageResult(LatticeFunction.zero(d), lam, l)
    rho = math.isqrt(lam)
    lo = np.max([f.points.min(axis=0) for f in finite], axis=0) - rho
    hi = np.min([f.points.max(axis=0) for f in finite], axis=0) + rho
    if np.any(lo > hi):
        return AverageResult(LatticeFunction.zero(d), lam, l)
    axes = [np.arange(lo[i], hi[i] + 1) for i in range(d)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    n_tuples = int(np.prod([f.points.shape[0] for f in finite]))
    if n_tuples * grid.shape[0] > guard:
        raise GuardExceededError(
            f"direct enumeration needs {n_tuples} tuples x {grid.shape[0]} points > guard {guard}"
        )
    total = np.zeros(grid.shape[0])
    rest_counts = np.array([rest(m) for m in range(lam + 1)], dtype=np.float64)
    for combo in itertools.product(*[range(f.points.shape[0]) for f in finite]):
        dist = np.zeros(grid.shape[0], dtype=np.int64)
        weight = 1.0
        for f, i in zip(finite, combo):
            diff = grid - f.points[i]
            dist += np.einsum("ij,ij->i", diff, diff)
            weight *= f.values[i]
        ok = dist <= lam
        if consts:
            total[ok] += weight * rest_counts[lam - dist[ok]]
        else:
            total[ok & (dist == lam)] += weight
    return AverageResult(LatticeFunction.from_points(grid, cscale * total / n, d), lam, l)
