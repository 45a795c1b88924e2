"""The minor-arc quantity (1/N(Lambda)) int_m sup_xi |F(theta, xi)| |F(theta)| dtheta.

sup over xi in T^d of |F(theta, xi)| factorizes as (max_xi |S_N(theta, xi)|)^d,
so only one-dimensional maximizations are needed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..lattice import get_table
from .arcs import farey_major_arcs
from .weyl import _quadratic_phases, sup_over_xi


@dataclass(frozen=True)
class MinorArcIntegral:
    d: int
    N: int
    Lambda: int
    raw: float  # int_m sup|F(theta,.)| |F(theta)| dtheta
    count: int  # N(Lambda) = r_{2d}(Lambda)
    nodes: int
    minor_measure: float

    @property
    def normalized(self) -> float:
        return self.raw / self.count


def minor_arc_nodes(N: int, step: float):
    """Midpoint nodes and weights covering each minor interval exactly."""
    intervals = farey_major_arcs(N).minor_intervals()
    nodes, weights = [], []
    for lo, hi in intervals:
        n = max(1, int(np.ceil((hi - lo) / step)))
        h = (hi - lo) / n
        nodes.append(lo + h * (np.arange(n) + 0.5))
        weights.append(np.full(n, h))
    return np.concatenate(nodes), np.concatenate(weights)


def _chunk_integrand(N, d, theta):
    sup = sup_over_xi(N, theta)
    s0 = np.abs(_quadratic_phases(N, theta).sum(axis=-1))
    return sup**d * s0**d


def minor_arc_integral(d: int, N: int, Lambda: int | None = None, *, c: float = 1.0 / 16, chunk: int = 2048, threads: int = 1) -> MinorArcIntegral:
    """Midpoint quadrature at step c/N^2 over the minor arcs of farey_major_arcs(N)."""
    if d < 1 or N < 1:
        raise DomainError("need d >= 1 and N >= 1")
    if c > 1.0 / 16:
        raise DomainError("step constant c must be <= 1/16")
    Lambda = N * N if Lambda is None else Lambda
    theta, w = minor_arc_nodes(N, c / N**2)
    pieces = [theta[i : i + chunk] for i in range(0, theta.size, chunk)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(lambda th: _chunk_integrand(N, d, th), pieces))
    else:
        vals = [_chunk_integrand(N, d, th) for th in pieces]
    integrand = np.concatenate(vals)
    raw = float(np.dot(w, integrand))
    count = get_table(2 * d, Lambda).count(Lambda)
    return MinorArcIntegral(
        d=d, N=N, Lambda=Lambda, raw=raw, count=count, nodes=theta.size, minor_measure=float(w.sum())
    )
