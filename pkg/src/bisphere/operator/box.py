"""Exact averages when every slot is a box indicator (common side L) or a constant.

For chi = 1_{[0,L)^d} the shell generating polynomial factors over coordinates,

    sum_k (chi * omega_k)(x) z^k = prod_i theta_{x_i}(z),   theta_t(z) = sum_{0<=y<L} z^{(t-y)^2},

and theta_t = theta_{L-1-t}.  So the z-polynomial at x depends only on the
sorted tuple of coordinate classes, of which there are about (L/2 + rho)^d / d!.
Products are taken by FFT on integer coefficients and rounded back, with a
mass guard that switches to exact integer convolution when rounding could fail.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..lattice import get_table
from .functions import LatticeFunction

__all__ = ["all_boxes", "BoxCoefficients", "box_coefficients", "box_average", "box_maximal", "box_maximal_norm"]

_FFT_SAFE_MASS = 2.0**50


def all_boxes(fs) -> bool:
    """True when the slots are boxes of one common side plus constants (at least one box)."""
    sides = {f.side for f in fs if f.kind == "box"}
    return len(sides) == 1 and all(f.kind in ("box", "constant") for f in fs)


@dataclass(frozen=True)
class BoxCoefficients:
    dim: int
    side: int
    rho: int
    lam_max: int
    tuples: np.ndarray  # (n, d) sorted class indices
    coef: np.ndarray  # (n, lam_max+1) exact integer counts stored as float64
    scale: float  # product of slot scales
    class_size: np.ndarray  # number of coordinates t mapping to each class

    def coordinate_classes(self) -> tuple[np.ndarray, np.ndarray]:
        return _coordinate_classes(self.side, self.rho)

    def multiplicity(self) -> np.ndarray:
        """Number of lattice points x whose sorted class tuple is each row."""
        d = self.dim
        out = np.empty(self.tuples.shape[0])
        for i, row in enumerate(self.tuples.tolist()):
            m = math.factorial(d)
            for _, grp in itertools.groupby(row):
                g = list(grp)
                m //= math.factorial(len(g))
                m *= int(self.class_size[g[0]]) ** len(g)
            out[i] = m
        return out

    def expand(self, row_values: np.ndarray) -> LatticeFunction:
        """Spread one value per class tuple back over the grid points."""
        t, cls = self.coordinate_classes()
        d = self.dim
        n_cls = self.class_size.size
        grid = np.stack(np.meshgrid(*([t] * d), indexing="ij"), axis=-1).reshape(-1, d)
        ci = np.sort(cls[grid + self.rho], axis=1)
        keys = np.ravel_multi_index(ci.T, (n_cls,) * d)
        row_keys = np.ravel_multi_index(self.tuples.T, (n_cls,) * d)
        order = np.argsort(row_keys)
        pos = order[np.searchsorted(row_keys[order], keys)]
        vals = row_values[pos]
        keep = vals != 0
        return LatticeFunction.from_points(grid[keep], vals[keep], d)


def _coordinate_classes(side: int, rho: int) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates t in [-rho, L-1+rho] and their class indices."""
    t = np.arange(-rho, side + rho)
    return t, np.minimum(t, side - 1 - t) + rho


def _theta(side: int, rho: int, lam_max: int) -> np.ndarray:
    """Truncated theta_t for each class c = t + rho, t in [-rho, (L-1)//2]."""
    n_cls = rho + (side + 1) // 2
    out = np.zeros((n_cls, lam_max + 1), dtype=np.int64)
    y = np.arange(side)
    for c in range(n_cls):
        sq = (c - rho - y) ** 2
        sq = sq[sq <= lam_max]
        np.add.at(out[c], sq, 1)
    return out


def _poly_power_int(p: np.ndarray, n: int, lam_max: int) -> np.ndarray:
    out = np.zeros(lam_max + 1, dtype=np.int64)
    out[0] = 1
    for _ in range(n):
        out = np.convolve(out, p)[: lam_max + 1]
    return out


def box_coefficients(fs, lam_max: int) -> BoxCoefficients:
    """Numerator polynomials, truncated at lam_max, for every class tuple."""
    fs = list(fs)
    if not all_boxes(fs):
        raise DomainError("box path needs box slots of one common side plus constants")
    d = fs[0].dim
    side = next(f.side for f in fs if f.kind == "box")
    m_box = sum(f.kind == "box" for f in fs)
    m_const = len(fs) - m_box
    scale = float(np.prod([f.scale for f in fs]))
    rho = math.isqrt(lam_max)
    theta = _theta(side, rho, lam_max)
    n_cls = theta.shape[0]
    per_class = np.array([_poly_power_int(theta[c], m_box, lam_max) for c in range(n_cls)])
    rd = get_table(d, lam_max).counts[: lam_max + 1].astype(np.int64)
    const_poly = _poly_power_int(rd, m_const, lam_max)
    tuples = np.array(list(itertools.combinations_with_replacement(range(n_cls), d)), dtype=np.int64)
    tuples = tuples.reshape(-1, d)

    mass = float(per_class.sum(axis=1).max()) ** d * float(const_poly.sum())
    if mass < _FFT_SAFE_MASS:
        nfft = 1 << int(math.ceil(math.log2((d + 1) * lam_max + 1)))
        spec_cls = np.fft.rfft(per_class.astype(np.float64), n=nfft, axis=1)
        spec_const = np.fft.rfft(const_poly.astype(np.float64), n=nfft)
        coef = np.empty((tuples.shape[0], lam_max + 1))
        step = max(1, 2_000_000 // nfft)
        for i in range(0, tuples.shape[0], step):
            blk = tuples[i : i + step]
            prod = spec_const[None, :] * np.prod(spec_cls[blk], axis=1)
            coef[i : i + step] = np.rint(np.fft.irfft(prod, n=nfft, axis=1)[:, : lam_max + 1])
    else:
        coef = np.empty((tuples.shape[0], lam_max + 1))
        for i, row in enumerate(tuples):
            acc = const_poly
            for c in row:
                acc = np.convolve(acc, per_class[c])[: lam_max + 1]
            coef[i] = acc

    _, cls = _coordinate_classes(side, rho)
    class_size = np.bincount(cls, minlength=n_cls)
    return BoxCoefficients(d, side, rho, lam_max, tuples, coef, scale, class_size)


def _live(d, l, lams):
    lams = sorted(set(int(x) for x in lams))
    counts = {lam: get_table(l * d, lam).count(lam) for lam in lams}
    live = [lam for lam in lams if counts[lam] > 0]
    skipped = tuple(lam for lam in lams if counts[lam] == 0)
    if not live:
        raise DomainError(f"every lambda in the range has an empty sphere: {lams}")
    return live, skipped, np.array([counts[lam] for lam in live], dtype=np.float64)


def box_average(fs, lam: int) -> LatticeFunction:
    """Signed T_lam for box/constant slots."""
    fs = list(fs)
    bc = box_coefficients(fs, lam)
    n = get_table(len(fs) * bc.dim, lam).count(lam)
    return bc.expand(bc.scale * bc.coef[:, lam] / n)


def _box_max_rows(fs, lams):
    fs = list(fs)
    d = fs[0].dim
    live, skipped, norm = _live(d, len(fs), lams)
    bc = box_coefficients(fs, max(live))
    vals = np.abs(bc.scale * bc.coef[:, live]) / norm[None, :]
    j = np.argmax(vals, axis=1)
    return bc, vals[np.arange(vals.shape[0]), j], np.array(live)[j], tuple(live), skipped


def box_maximal(fs, lams):
    """max_lam |T_lam| for box/constant slots, materialized on the grid."""
    from .average import MaximalResult

    bc, best, arg, live, skipped = _box_max_rows(fs, lams)
    values = bc.expand(best)
    # argmax aligned with values.points
    t, cls = bc.coordinate_classes()
    n_cls = bc.class_size.size
    if values.points.shape[0]:
        ci = np.sort(cls[values.points + bc.rho], axis=1)
        keys = np.ravel_multi_index(ci.T, (n_cls,) * bc.dim)
        row_keys = np.ravel_multi_index(bc.tuples.T, (n_cls,) * bc.dim)
        order = np.argsort(row_keys)
        argmax = arg[order[np.searchsorted(row_keys[order], keys)]]
    else:
        argmax = np.zeros(0, dtype=np.int64)
    return MaximalResult(values, argmax, live, skipped)


def box_maximal_norm(fs, lams, r: float) -> float:
    """||max_lam |T_lam|||_r without materializing the output grid."""
    if r < 1:
        raise DomainError(f"need r >= 1, got {r}")
    bc, best, _, _, _ = _box_max_rows(fs, lams)
    if math.isinf(r):
        return float(best.max(initial=0.0))
    mult = bc.multiplicity()
    return float(np.dot(mult, best**r) ** (1.0 / r))
