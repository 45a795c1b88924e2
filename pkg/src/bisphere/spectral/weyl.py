"""Quadratic Weyl sums S_N(theta, xi) = sum_{0<=u<=N} e(theta u^2 + xi u)."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError

TWO_PI = 2.0 * np.pi
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def e(x):
    """e(x) = exp(2 pi i x)."""
    return np.exp(1j * TWO_PI * np.asarray(x, dtype=np.float64))


def _quadratic_phases(N: int, theta) -> np.ndarray:
    """Coefficients e(theta u^2), shape ``theta.shape + (N+1,)``.

    The fractional part is taken in float before exponentiating; ``u^2`` is
    exact in int64.
    """
    u2 = np.arange(N + 1, dtype=np.int64) ** 2
    th = np.asarray(theta, dtype=np.float64)[..., None]
    return e(np.mod(th * u2, 1.0))


def weyl_sum(N: int, theta, xi=0.0):
    """S_N(theta, xi), broadcasting over array ``theta`` and ``xi``."""
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    th, x = np.broadcast_arrays(np.asarray(theta, float), np.asarray(xi, float))
    u = np.arange(N + 1, dtype=np.float64)
    phase = np.mod(th[..., None] * u**2 + x[..., None] * u, 1.0)
    out = np.exp(1j * TWO_PI * phase).sum(axis=-1)
    return out if out.ndim else complex(out)


def generating_product(N: int, theta: float, xi) -> complex:
    """F(theta, xi) F(theta) = prod_i S_N(theta, xi_i) * S_N(theta, 0)^d."""
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    d = xi.shape[-1]
    if d < 1:
        raise DomainError("xi must have at least one coordinate")
    s = weyl_sum(N, theta, xi)
    s0 = weyl_sum(N, theta, 0.0)
    return complex(np.prod(s) * s0**d)


def weyl_sums_on_grid(N: int, theta, grid: int | None = None) -> np.ndarray:
    """S_N(theta, j/grid) for j = 0..grid-1 via one FFT per theta.

    ``grid`` defaults to 8N (at least N+1).  Output has shape
    ``theta.shape + (grid,)``.
    """
    m = max(grid or 8 * N, N + 1)
    coef = _quadratic_phases(N, theta)
    return m * np.fft.ifft(coef, n=m, axis=-1)


def _abs_at(coef: np.ndarray, xi: np.ndarray) -> np.ndarray:
    u = np.arange(coef.shape[-1], dtype=np.float64)
    return np.abs((coef * e(np.mod(xi[:, None] * u[None, :], 1.0))).sum(axis=-1))


def sup_over_xi(N: int, theta, grid: int | None = None, iters: int = 25) -> np.ndarray:
    """max over xi in T of |S_N(theta, xi)| for each theta.

    Grid search on 8N points, then golden-section refinement inside the
    bracket of the best grid point.  Returns an array shaped like ``theta``.
    """
    th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    flat = th.ravel()
    m = max(grid or 8 * N, N + 1)
    coef = _quadratic_phases(N, flat)
    vals = np.abs(m * np.fft.ifft(coef, n=m, axis=-1))
    j = vals.argmax(axis=-1)
    best = vals[np.arange(flat.size), j]
    lo = (j - 1) / m
    hi = (j + 1) / m
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = _abs_at(coef, x1)
    f2 = _abs_at(coef, x2)
    for _ in range(iters):
        left = f1 > f2
        # maximum lies in [lo, x2] where f1 > f2, else in [x1, hi]
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x2n = np.where(left, x1, lo + _GOLDEN * (hi - lo))
        x1n = np.where(left, hi - _GOLDEN * (hi - lo), x2)
        f2n = np.where(left, f1, np.nan)
        f1n = np.where(left, np.nan, f2)
        need1 = np.isnan(f1n)
        need2 = np.isnan(f2n)
        if need1.any():
            f1n[need1] = _abs_at(coef[need1], x1n[need1])
        if need2.any():
            f2n[need2] = _abs_at(coef[need2], x2n[need2])
        x1, x2, f1, f2 = x1n, x2n, f1n, f2n
    best = np.maximum(best, np.maximum(f1, f2))
    return best.reshape(th.shape) if np.ndim(theta) else float(best[0])
