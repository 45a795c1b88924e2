"""The exact partial symbol of the lattice sphere measure and its major-arc models.

sigma_hat_exact is the normalized sum over (u, v) on the lattice sphere of
e(u . xi).  The major-arc multipliers follow the circle-method expansion
around a/q:

* multiplier_A keeps the truncated beta-integral of the bump transforms;
* multiplier_B inserts the frequency cutoffs Psi_1(q xi - l), Psi_2(-m);
* multiplier_M replaces the beta-integral by the continuous sphere
  transform and sums the layers q <= q_max.

The v-variables carry the degenerate sums G(m, 0, q) by default.  Passing
``v_phase="gauss"`` (or ``variant="arithmetic"`` for M) uses the full
Gauss sums G(m, a, q) that the quadratic phase of v produces, which is the
form that approximates sigma_hat numerically.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..errors import DomainError, UndefinedAverageError
from ..lattice import get_table, sphere_points
from .bessel import sphere_ft
from .bump import Cutoff
from .gauss import gauss_sum_1d, gauss_sum_table, reduced_residues
from .oscillatory import box_phase_ft, panel_nodes
from .weyl import e

__all__ = [
    "sigma_hat_exact",
    "multiplier_A",
    "multiplier_B",
    "multiplier_M",
    "multiplier_M_term",
    "singular_integral",
]


def _as_points(xi, d: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(xi, dtype=np.float64)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[-1] != d:
        raise DomainError(f"xi must have {d} coordinates, got shape {x.shape}")
    return x, single


def sigma_hat_exact(d: int, lam: int, xi, arity: int = 2):
    """(1/N(lam)) sum_{|u|^2+|v|^2=lam} e(u . xi), via shells of u.

    ``sum_k [sum_{|u|^2=k} e(u.xi)] * r_{(arity-1)d}(lam-k)``.  ``xi`` may be a
    single point (d,) or a batch (n, d).
    """
    x, single = _as_points(xi, d)
    total_dim = arity * d
    n_lam = get_table(total_dim, lam).count(lam)
    if n_lam == 0:
        raise UndefinedAverageError(f"no lattice points with |(u,v)|^2 = {lam} in Z^{total_dim}")
    rest = get_table((arity - 1) * d, lam) if arity > 1 else None
    acc = np.zeros(x.shape[0], dtype=np.complex128)
    for k in range(lam + 1):
        weight = rest.count(lam - k) if rest is not None else int(k == lam)
        if weight == 0:
            continue
        pts = sphere_points(d, k)
        if pts.shape[0] == 0:
            continue
        phase = np.mod(x @ pts.T.astype(np.float64), 1.0)
        acc += weight * np.exp(2j * np.pi * phase).sum(axis=1)
    out = acc / n_lam
    return complex(out[0]) if single else out


def singular_integral(k: int, lam: float) -> float:
    """Surface density of {|x|^2 = lam} in R^k: pi^{k/2} lam^{k/2-1} / Gamma(k/2)."""
    return math.pi ** (k / 2) * lam ** (k / 2 - 1) / math.gamma(k / 2)


# ---------------------------------------------------------------- major arcs


def _beta_integral(integrand, width: float, rate: float, rtol: float, max_levels: int = 6):
    """Composite GL over [-width, width] with panels sized to the phase rate."""
    panels = max(4, int(np.ceil(2 * width * rate)))
    nodes, w = panel_nodes(-width, width, panels)
    vals = integrand(nodes)
    prev = np.dot(w, vals)
    for _ in range(max_levels):
        panels *= 2
        nodes, w = panel_nodes(-width, width, panels)
        vals = integrand(nodes)
        cur = np.dot(w, vals)
        mass = float(np.dot(w, np.abs(vals)))
        if abs(cur - prev) <= rtol * max(mass, 1e-300):
            return cur
        prev = cur
    from ..errors import QuadratureError

    raise QuadratureError(
        f"beta-integral did not converge (|delta|={abs(cur - prev):.3e}, mass={mass:.3e})",
        estimate=cur,
        error=abs(cur - prev),
        levels=max_levels,
    )


def _major_arc(a, q, lam, N, d, xi, *, psi1, psi2, v_phase, l_window, m_window, arity, rtol):
    if q < 1 or math.gcd(a, q) != 1:
        raise DomainError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    if q > N:
        raise DomainError(f"need q <= N, got q={q}, N={N}")
    xi = np.asarray(xi, dtype=np.float64)
    if xi.shape != (d,):
        raise DomainError(f"xi must have shape ({d},)")
    n_lam = get_table(arity * d, lam).count(lam)
    if n_lam == 0:
        raise UndefinedAverageError(f"N({lam}) = 0")
    bump = Cutoff(1.0)

    # per-coordinate u-factor: sum_l g(l,a,q) [Psi_1(q xi - l)] b(xi - l/q; beta)
    u_terms = []
    for x in xi:
        if psi1 is not None:
            r = psi1.support_radius
            ls = np.arange(math.floor(q * x - r), math.ceil(q * x + r) + 1)
            wts = psi1(q * x - ls)
        else:
            ls = np.arange(math.floor(q * (x - l_window)), math.ceil(q * (x + l_window)) + 1)
            wts = np.ones(ls.size)
        coef = np.array([gauss_sum_1d(int(l), a, q) for l in ls]) * wts
        keep = coef != 0
        u_terms.append((x - ls[keep] / q, coef[keep]))

    # per-coordinate v-factor: sum_m G_1(m, ., q) [Psi_2(-m)] b(-m/q; beta)
    if v_phase == "degenerate":
        ms = q * np.arange(-m_window, m_window + 1)  # G(m,0,q) kills m not divisible by q
        vcoef = np.ones(ms.size, dtype=np.complex128)
    elif v_phase == "gauss":
        ms = np.arange(-m_window * q, m_window * q + 1)
        vcoef = np.array([gauss_sum_1d(int(m), a, q) for m in ms])
    else:
        raise DomainError(f"unknown v_phase {v_phase!r}")
    if psi2 is not None:
        vcoef = vcoef * psi2(-ms.astype(np.float64))
    keep = vcoef != 0
    v_eta, vcoef = -ms[keep] / q, vcoef[keep]
    n_v = (arity - 1) * d

    def integrand(beta):
        out = e(np.mod(-lam * beta, 1.0))
        for eta, coef in u_terms:
            if eta.size == 0:
                return np.zeros_like(out)
            vals = box_phase_ft(beta[:, None], N, eta[None, :], bump=bump, rtol=rtol)
            out = out * (vals @ coef)
        if n_v:
            if v_eta.size == 0:
                return np.zeros_like(out)
            vals = box_phase_ft(beta[:, None], N, v_eta[None, :], bump=bump, rtol=rtol)
            out = out * (vals @ vcoef) ** n_v
        return out

    width = 1.0 / (8 * q * N)
    rate = lam + (bump.support_radius * N) ** 2
    integral = _beta_integral(integrand, width, rate, rtol)
    return complex(e(np.mod(-lam * a / q, 1.0)) * integral / n_lam)


def multiplier_A(a, q, lam, N, d, xi, *, v_phase="degenerate", l_window=1.5, m_window=1, arity=2, rtol=1e-8):
    """A^{a/q}_lam(xi): truncated beta-integral, no frequency cutoffs.

    The l-sum keeps |xi_i - l_i/q| <= l_window and the m-sum |m_i/q| <= m_window;
    outside those windows the bump transforms are non-stationary and negligible.
    """
    return _major_arc(
        a, q, lam, N, d, xi, psi1=None, psi2=None, v_phase=v_phase,
        l_window=l_window, m_window=m_window, arity=arity, rtol=rtol,
    )


def multiplier_B(a, q, lam, N, d, xi, *, psi_scale=0.25, psi2=True, v_phase="degenerate", m_window=1, arity=2, rtol=1e-8):
    """B^{a/q}_lam(xi): A with Psi_1(q xi - l) and Psi_2(-m) inserted.

    With the default scale Psi_2 keeps only m = 0; ``psi2=False`` drops the
    cutoff and restricts the m-sum to 0 directly.
    """
    cut = Cutoff(psi_scale)
    return _major_arc(
        a, q, lam, N, d, xi, psi1=cut, psi2=cut if psi2 else None, v_phase=v_phase,
        l_window=0.0, m_window=m_window if psi2 else 0, arity=arity, rtol=rtol,
    )


def _candidate_offsets(scale: float, d: int):
    k = int(math.ceil(2 * scale))
    return list(itertools.product(range(-k, k + 1), repeat=d))


def multiplier_M_term(a, q, lam, d, xi, *, psi_scale=0.25, variant="literal", arity=2):
    """Single (a, q) term of M_lam at points ``xi`` (n, d) or (d,)."""
    x, single = _as_points(xi, d)
    out = _m_layer(q, [a], lam, x, psi_scale, variant, arity)
    return complex(out[0]) if single else out


def _m_layer(q, residues, lam, x, psi_scale, variant, arity):
    d = x.shape[1]
    cut = Cutoff(psi_scale)
    k_dim = arity * d
    radius = math.sqrt(lam)
    base = np.rint(q * x).astype(np.int64)
    tables = {a: gauss_sum_table(a, q) for a in residues}
    phases = {a: complex(e((-lam * a % q) / q)) for a in residues}
    n_v = (arity - 1) * d
    if variant == "arithmetic":
        n_lam = get_table(k_dim, lam).count(lam)
        if n_lam == 0:
            raise UndefinedAverageError(f"N({lam}) = 0")
        norm = singular_integral(k_dim, lam) / n_lam
        vfac = {a: tables[a][0] ** n_v for a in residues}
    elif variant == "literal":
        norm = 1.0
        vfac = {a: 1.0 for a in residues}
    else:
        raise DomainError(f"unknown variant {variant!r}")
    layer = np.zeros(x.shape[0], dtype=np.complex128)
    for off in _candidate_offsets(psi_scale, d):
        ls = base + np.asarray(off)
        w = cut.tensor(q * x - ls)
        live = w != 0
        if not live.any():
            continue
        lsl, xl = ls[live], x[live]
        dist = np.linalg.norm(xl - lsl / q, axis=1)
        radial = sphere_ft(k_dim, radius, dist) if lam > 0 else np.ones(dist.size)
        arith = np.zeros(lsl.shape[0], dtype=np.complex128)
        for a in residues:
            arith += phases[a] * vfac[a] * np.prod(tables[a][lsl % q], axis=1)
        layer[live] += arith * w[live] * radial
    return layer * norm


def multiplier_M(lam, N, d, xi, q_max, *, psi_scale=0.25, variant="literal", arity=2, return_layers=False):
    """M_lam(xi) = sum_{q <= q_max} sum_{a in U_q} e(-lam a/q) sum_l G(l,a,q) Psi_1(q xi - l) dsigma(xi - l/q).

    ``variant="literal"`` pins the v-factor to G(0,0,q) Psi_2(0) = 1.
    ``variant="arithmetic"`` uses G(0,a,q)^{(arity-1)d} and rescales by the
    singular integral over N(lam), so that q_max -> infinity reproduces the
    singular-series count at xi = 0.

    Returns the sum (scalar or (n,)) and, with ``return_layers``, the
    per-q partial layers as a (q_max, n) array.
    """
    if q_max > N:
        raise DomainError(f"q_max={q_max} exceeds the dissection parameter N={N}")
    if q_max < 1:
        raise DomainError("q_max must be >= 1")
    x, single = _as_points(xi, d)
    layers = np.array(
        [_m_layer(q, reduced_residues(q), lam, x, psi_scale, variant, arity) for q in range(1, q_max + 1)]
    )
    total = layers.sum(axis=0)
    if single:
        total = complex(total[0])
        layers = layers[:, 0]
    return (total, layers) if return_layers else total
