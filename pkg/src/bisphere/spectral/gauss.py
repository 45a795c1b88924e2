"""Normalized quadratic Gauss sums and the degenerate (linear) sums.

One coordinate factor is

    g(l, a, q) = q^{-1} sum_{y mod q} e((a y^2 + l y) / q),

and the d-dimensional G(l, a, q) is the product over coordinates.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from ..errors import DomainError

__all__ = [
    "gauss_sum_1d",
    "gauss_sum",
    "gauss_sum_table",
    "degenerate_sum",
    "reduced_residues",
    "totients",
    "gauss_layer_series",
]


def _check(a: int, q: int) -> None:
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd(a, q) must be 1, got a={a}, q={q}")


@functools.lru_cache(maxsize=1 << 16)
def _g1(l: int, a: int, q: int) -> complex:
    y = np.arange(q, dtype=np.int64)
    k = (a * y * y + l * y) % q
    return complex(np.exp(2j * np.pi * k / q).sum() / q)


def gauss_sum_1d(l: int, a: int, q: int) -> complex:
    """g(l, a, q) by direct O(q) summation, cached on (l mod q, a mod q, q)."""
    _check(a, q)
    return _g1(l % q, a % q, q)


def gauss_sum(l, a: int, q: int) -> complex:
    """G(l, a, q) for an integer vector ``l``."""
    out = 1.0 + 0.0j
    for li in np.atleast_1d(l):
        out *= gauss_sum_1d(int(li), a, q)
    return out


def gauss_sum_table(a: int, q: int) -> np.ndarray:
    """g(l, a, q) for l = 0..q-1, summed directly as a q x q matrix."""
    _check(a, q)
    y = np.arange(q, dtype=np.int64)
    l = y[:, None]
    k = (a * y[None, :] ** 2 + l * y[None, :]) % q
    return np.exp(2j * np.pi * k / q).sum(axis=1) / q


def degenerate_sum(m, q: int) -> int:
    """G(m, 0, q) = q^{-d} sum_z e(m.z/q), i.e. 1 if q divides every m_i, else 0."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    return int(all(int(mi) % q == 0 for mi in np.atleast_1d(m)))


def reduced_residues(q: int) -> list[int]:
    """U_q as 1 <= a <= q with gcd(a, q) = 1 (so U_1 = [1])."""
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1]


def totients(n_max: int) -> np.ndarray:
    """Euler phi on 0..n_max by sieve."""
    phi = np.arange(n_max + 1, dtype=np.int64)
    for p in range(2, n_max + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def gauss_layer_series(d: int, p: float, q_max: int) -> np.ndarray:
    """Partial sums S(Q) = sum_{q<=Q} phi(q) q^{-d(1-1/p)} for Q = 1..q_max.

    Each layer q contributes phi(q) fractions a/q, each bounded by
    q^{-d(1-1/p)}; the series converges iff p > d/(d-2).
    """
    phi = totients(q_max)[1:].astype(np.float64)
    q = np.arange(1, q_max + 1, dtype=np.float64)
    return np.cumsum(phi * q ** (-d * (1.0 - 1.0 / p)))
