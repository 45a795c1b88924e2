"""Farey major arcs M_{a/q} = {|theta - a/q| <= 1/(8qN)} and their complement.

Endpoints are rational, so disjointness is decided with integer cross
multiplication rather than floats: for neighbours a/q < b/s the arcs are
disjoint iff 8N(bq - as) > q + s.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DomainError

__all__ = [
    "FareyArc",
    "ArcSet",
    "farey_sequence",
    "farey_major_arcs",
    "all_arcsets_disjoint",
]


@dataclass(frozen=True, order=True)
class FareyArc:
    q: int
    a: int
    N: int

    def __post_init__(self):
        if not (1 <= self.q <= self.N):
            raise DomainError(f"need 1 <= q <= N, got q={self.q}, N={self.N}")
        if not (1 <= self.a <= self.q) or math.gcd(self.a, self.q) != 1:
            raise DomainError(f"{self.a}/{self.q} is not a reduced fraction in (0, 1]")

    @property
    def center(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def half_width(self) -> Fraction:
        return Fraction(1, 8 * self.q * self.N)

    def contains(self, theta: float) -> bool:
        dist = abs((theta - self.a / self.q + 0.5) % 1.0 - 0.5)
        return dist <= 1.0 / (8 * self.q * self.N)


def farey_sequence(N: int) -> list[tuple[int, int]]:
    """Reduced fractions a/q in [0, 1] with q <= N, ascending, as (a, q)."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    a, b, c, d = 0, 1, 1, N
    out = [(a, b)]
    while c <= N:
        k = (N + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        out.append((a, b))
    return out


@dataclass(frozen=True)
class ArcSet:
    """All major arcs for a dissection parameter N, in (q, a) order."""

    N: int
    arcs: tuple[FareyArc, ...]

    def __len__(self):
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    def sorted_fractions(self) -> list[tuple[int, int]]:
        """Centers on the circle as (a, q), ascending from 0 (the arc at 1/1)."""
        return [(0, 1)] + [(a, q) for a, q in farey_sequence(self.N)[1:-1]]

    def is_disjoint(self) -> bool:
        """Exact sort-and-scan check, wrapping 1/1 around to 0/1."""
        N = self.N
        seq = farey_sequence(N)  # 0/1, ..., 1/1: the ends are the same arc
        if N == 1:
            return Fraction(2, 8) < 1
        for (a, q), (b, s) in zip(seq, seq[1:]):
            if 8 * N * (b * q - a * s) <= q + s:
                return False
        return True

    def measure(self) -> Fraction:
        return sum((2 * arc.half_width for arc in self.arcs), Fraction(0))

    def minor_intervals(self) -> np.ndarray:
        """Closed complement intervals of the arcs inside [0, 1), shape (k, 2).

        Endpoints are computed as exact fractions and rounded once to float.
        """
        N = self.N
        seq = farey_sequence(N)
        lo_hi = []
        for (a, q), (b, s) in zip(seq, seq[1:]):
            lo = Fraction(a, q) + Fraction(1, 8 * q * N)
            hi = Fraction(b, s) - Fraction(1, 8 * s * N)
            if lo < hi:
                lo_hi.append((float(lo), float(hi)))
        return np.array(lo_hi, dtype=np.float64).reshape(-1, 2)

    def contains(self, theta) -> np.ndarray:
        """Vectorized membership of ``theta`` (mod 1) in the union of arcs."""
        th = np.mod(np.asarray(theta, dtype=np.float64), 1.0)
        fr = farey_sequence(self.N)
        centers = np.array([a / q for a, q in fr])
        widths = np.array([1.0 / (8 * q * self.N) for a, q in fr])
        idx = np.clip(np.searchsorted(centers, th), 1, len(centers) - 1)
        near_right = np.abs(centers[idx] - th) <= widths[idx]
        near_left = np.abs(th - centers[idx - 1]) <= widths[idx - 1]
        return near_left | near_right

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "q", "center", "half_width"])
        for arc in self.arcs:
            w.writerow([arc.a, arc.q, repr(arc.a / arc.q), repr(1.0 / (8 * arc.q * arc.N))])
        return buf.getvalue()


def farey_major_arcs(N: int) -> ArcSet:
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    arcs = tuple(
        FareyArc(q=q, a=a, N=N)
        for q in range(1, N + 1)
        for a in range(1, q + 1)
        if math.gcd(a, q) == 1
    )
    return ArcSet(N=N, arcs=arcs)


def all_arcsets_disjoint(n_max: int) -> dict[int, bool]:
    """Disjointness of farey_major_arcs(N) for every N <= n_max at once.

    All reduced a/q with q <= n_max are sorted once (by float value); the
    order of each sub-sequence q <= N is then re-verified with exact integer
    cross products before the interval test, so a float mis-sort cannot
    produce a false pass.
    """
    qs, as_ = [np.array([1])], [np.array([0])]
    for q in range(1, n_max + 1):
        a = np.arange(1, q + 1)
        a = a[np.gcd(a, q) == 1]
        qs.append(np.full(a.size, q))
        as_.append(a)
    q_all = np.concatenate(qs).astype(np.int64)
    a_all = np.concatenate(as_).astype(np.int64)
    order = np.lexsort((q_all, a_all / q_all))
    q_all, a_all = q_all[order], a_all[order]
    result = {}
    for N in range(1, n_max + 1):
        keep = q_all <= N
        q, a = q_all[keep], a_all[keep]
        cross = a[1:] * q[:-1] - a[:-1] * q[1:]  # b*q - a*s for neighbours
        if (cross <= 0).any():
            raise AssertionError(f"float sort produced a wrong Farey order at N={N}")
        if N == 1:
            result[N] = True
            continue
        result[N] = bool((8 * N * cross > q[:-1] + q[1:]).all())
    return result
