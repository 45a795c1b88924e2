"""Oscillatory integrals of the bump times a quadratic phase.

    b(eta; beta) = int_R e(beta t^2) phi(t/N) e(-t eta) dt

is computed by composite Gauss-Legendre on panels no wider than an eighth
of the shortest local wavelength, doubling the panel count until two
successive levels agree.
"""

from __future__ import annotations

import functools

import numpy as np

from ..errors import DomainError, QuadratureError
from .bump import Cutoff

_ORDER = 8


@functools.lru_cache(maxsize=None)
def _gl(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(lo: float, hi: float, panels: int, order: int = _ORDER):
    """Composite Gauss-Legendre nodes and weights on [lo, hi]."""
    x, w = _gl(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _box_phase_level(beta, eta, N, bump, panels):
    t, w = panel_nodes(-bump.support_radius * N, bump.support_radius * N, panels)
    amp = bump(t / N) * w
    keep = amp != 0
    t, amp = t[keep], amp[keep]
    out = np.empty(beta.shape, dtype=np.complex128)
    flat_b, flat_e, flat_o = beta.ravel(), eta.ravel(), out.reshape(-1)
    chunk = max(1, 2_000_000 // max(t.size, 1))
    for i in range(0, flat_b.size, chunk):
        b = flat_b[i : i + chunk, None]
        h = flat_e[i : i + chunk, None]
        phase = np.mod(b * t * t - h * t, 1.0)
        flat_o[i : i + chunk] = (np.exp(2j * np.pi * phase) * amp).sum(axis=1)
    return out


def box_phase_ft(beta, N: float, eta, *, bump: Cutoff | None = None, rtol: float = 1e-8, max_levels: int = 8):
    """b(eta; beta), broadcasting over ``beta`` and ``eta``.

    Errors are measured against the L1 mass of the integrand (3N for the
    default bump), which keeps the test meaningful where b is nearly zero.
    Raises :class:`QuadratureError` if refinement does not settle.
    """
    if N <= 0:
        raise DomainError(f"N must be positive, got {N}")
    bump = bump or Cutoff(1.0)
    beta, eta = np.broadcast_arrays(np.asarray(beta, float), np.asarray(eta, float))
    R = bump.support_radius * N
    fmax = 2.0 * float(np.abs(beta).max(initial=0.0)) * R + float(np.abs(eta).max(initial=0.0))
    width = min(N / 8.0, 1.0 / (8.0 * fmax)) if fmax > 0 else N / 8.0
    panels = max(8, int(np.ceil(2 * R / width)))
    scale = bump.integral() * N
    prev = cur = _box_phase_level(beta, eta, N, bump, panels)
    err = float("inf")
    for level in range(1, max_levels + 1):
        panels *= 2
        cur = _box_phase_level(beta, eta, N, bump, panels)
        err = float(np.abs(cur - prev).max(initial=0.0))
        if err <= rtol * scale:
            return cur if cur.ndim else complex(cur)
        prev = cur
    raise QuadratureError(
        f"box_phase_ft did not converge: error {err:.3e} > {rtol * scale:.3e} after {max_levels} refinements",
        estimate=cur,
        error=err,
        levels=max_levels,
    )
