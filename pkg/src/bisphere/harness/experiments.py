"""Desk-scale experiments: scaling, sharpness, Hölder sweeps, Weyl decay,
minor-arc decay and major-arc multiplier agreement.

Every run is deterministic given its parameters and seed.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..lattice import get_table
from ..operator import LatticeFunction, lp_norm, maximal_norm, norm_ratio
from ..spectral import (
    farey_major_arcs,
    minor_arc_integral,
    multiplier_B,
    multiplier_M,
    multiplier_M_term,
    reduced_residues,
    sigma_hat_exact,
    sup_over_xi,
    weyl_sum,
)
from .records import FAMILIES, ExperimentRecord, SweepGrid, fit_loglog

# lambda range [0, KAPPA * L^2] for box inputs of side L (scale covariant)
KAPPA = 4
DEFAULT_SEED = 20240517


def _finite(x: float):
    return "inf" if math.isinf(x) else x


# ------------------------------------------------------------------ scaling


def run_scaling_experiment(d: int = 3, L_list=(2, 4, 8, 16), p: float = 2.0, q: float = 2.0, r: float = 1.0, *, kappa: int = KAPPA, arity: int = 2) -> ExperimentRecord:
    """||T*(chi_L, ..., chi_L)||_r against L for the box chi_L = 1_{[0,L)^d}.

    T* runs over lambda in [0, kappa L^2].  The input side grows like
    L^{d/p + d/q}, which is a closed form, not a fit.
    """
    L_list = sorted(int(L) for L in L_list)
    if len(L_list) < 4:
        raise DomainError("need at least four box sides")
    exps = [p, q] + [q] * (arity - 2)
    norms, prods, ratios = [], [], []
    for L in L_list:
        fs = [LatticeFunction.box(d, L)] * arity
        lams = range(0, kappa * L * L + 1)
        n = maximal_norm(fs, lams, r)
        prod = float(np.prod([lp_norm(f, e) for f, e in zip(fs, exps)]))
        norms.append(n)
        prods.append(prod)
        ratios.append(n / prod)
    fit = fit_loglog(L_list, norms)
    logs = np.log(L_list)
    prod_slopes = np.diff(np.log(prods)) / np.diff(logs)
    ratio_fit = fit_loglog(L_list, ratios)
    violating = SweepGrid.violates_necessary((p, q, r))
    rec = ExperimentRecord(
        "scaling",
        {"d": d, "l": arity, "p": _finite(p), "q": _finite(q), "r": _finite(r), "L": L_list, "kappa": kappa},
        list(zip(L_list, norms)),
        fit,
        derived={
            "target_slope": d / r if not math.isinf(r) else 0.0,
            "norm_product": prods,
            "norm_product_slope": float(prod_slopes.mean()),
            "norm_product_slope_spread": float(np.ptp(prod_slopes)),
            "norm_product_target": sum(0.0 if math.isinf(e) else d / e for e in exps),
            "ratio": ratios,
            "ratio_slope": ratio_fit.slope,
            "ratio_residual": ratio_fit.residual,
            "violates_necessary": violating,
        },
    )
    if violating and ratio_fit.slope <= 0:
        rec.flags.append("violating triple but the ratio does not grow")
    return rec


# ---------------------------------------------------------------- sharpness


def sharpness_terms(d: int, n: int, R_max: int, p: float, congruence_filter: bool | None = None):
    """Per-shell data for sum_{|x|<=R} (r_d((n-1)|x|^2) / N(n|x|^2))^p.

    Returns (m, weight, term): m = |x|^2, weight = number of admissible x with
    that norm, term = the summand at such x.
    """
    if d < 3 or n < 1:
        raise DomainError("need d >= 3 and n >= 1")
    M = R_max * R_max
    rd = get_table(d, max(n, 1) * M).counts
    n2d = get_table(2 * d, n * M).counts
    m = np.arange(M + 1)
    term = (rd[(n - 1) * m].astype(np.float64) / n2d[n * m].astype(np.float64)) ** p
    weight = rd[: M + 1].astype(np.float64)
    if congruence_filter is None:
        congruence_filter = d == 4 and n > 1
    if congruence_filter:
        # d = 4: keep x whose (n-1)|x|^2 is 1 mod 8
        weight = np.where(((n - 1) * m) % 8 == 1, weight, 0.0)
    return m, weight, term


def classify_growth(R: np.ndarray, S: np.ndarray, tail_point: float, *, tail_tol: float = 1e-6, log_residual_tol: float = 0.1, window: float = 0.25) -> dict:
    """Label partial sums S(R) as convergent, log-like, power-like or undetermined.

    Uses D(R) = R (S(R) - S(R-1)) over the upper part of the range:
    D decaying (slope < -0.5) with tiny tail terms means convergent,
    flat D with a good fit of S against log R means log-like.
    """
    sel = R >= max(2, int(window * R[-1]))
    inc = np.diff(S, prepend=S[0])
    D = R * inc
    ok = sel & (D > 0)
    slope = float(np.polyfit(np.log(R[ok]), np.log(D[ok]), 1)[0]) if ok.sum() >= 3 else float("nan")
    lr = np.log(R[sel])
    b, a = np.polyfit(lr, S[sel], 1)
    residual = float(np.sqrt(np.mean((S[sel] - (a + b * lr)) ** 2)))
    if slope < -0.5 and tail_point < tail_tol:
        label = "convergent"
    elif abs(slope) <= 0.5 and residual < log_residual_tol and b > 0:
        label = "log-like"
    elif slope > 0.5:
        label = "power-like"
    else:
        label = "undetermined"
    return {
        "label": label,
        "increment_slope": slope,
        "log_fit_slope": float(b),
        "log_fit_residual": residual,
        "unbounded": label in ("log-like", "power-like"),
    }


def run_sharpness_experiment(d: int = 3, n: int = 1, R_max: int = 60, p: float = 1.0, *, congruence_filter: bool | None = None) -> ExperimentRecord:
    """Partial sums over |x| <= R of T_{n|x|^2}(delta_0, 1)(x)^p."""
    m, weight, term = sharpness_terms(d, n, R_max, p, congruence_filter)
    R = np.arange(1, R_max + 1)
    cum = np.cumsum(weight * term)
    S = cum[R * R]
    last = slice((R_max - 1) ** 2 + 1, R_max * R_max + 1)
    live = weight[last] > 0
    tail_point = float(term[last][live].max()) if live.any() else 0.0
    tail_shell = float(S[-1] - S[-2]) if R_max > 1 else float(S[-1])
    cls = classify_growth(R, S, tail_point)
    rec = ExperimentRecord(
        "sharpness",
        {"d": d, "n": n, "R_max": R_max, "p": p, "congruence_filter": bool(congruence_filter if congruence_filter is not None else (d == 4 and n > 1))},
        [(int(r), float(s)) for r, s in zip(R, S)],
        None,
        derived={"tail_point": tail_point, "tail_shell": tail_shell, **cls},
    )
    if cls["label"] == "undetermined":
        rec.flags.append("growth classifier could not decide")
    return rec


# -------------------------------------------------------------- Hölder sweep


def _family_inputs(family: str, d: int, size: int, rng: np.random.Generator, arity: int):
    """Inputs and the lambda range for one size of a family."""
    if family == "box":
        return [LatticeFunction.box(d, size)] * arity, range(0, KAPPA * size * size + 1)
    if family == "random_sparse":
        radius = max(1, round(size ** (1.0 / d)))
        fs = [LatticeFunction.random_sparse(d, size, radius, rng, signed=False) for _ in range(arity)]
        return fs, range(0, KAPPA * radius * radius + 1)
    if family == "delta_plus_constant":
        fs = [LatticeFunction.delta(d)] + [LatticeFunction.constant(d)] * (arity - 1)
        return fs, range(0, size * size + 1)
    raise DomainError(f"unknown family {family!r}; choose from {FAMILIES}")


def run_holder_sweep(grid: SweepGrid, d: int = 3, family: str | None = None, *, seed: int = DEFAULT_SEED, arity: int = 2) -> list:
    """Empirical ||T*||_r / prod ||f_i||_{p_i} per triple across the size schedule.

    For ``delta_plus_constant`` the constant slot is measured in l^infinity,
    its only finite norm; the record keeps the requested q alongside.
    """
    family = family or grid.family
    records = []
    for t_idx, (p, q, r) in enumerate(grid.triples):
        rng = np.random.default_rng([seed, t_idx])
        ratios = []
        for size in grid.sizes:
            fs, lams = _family_inputs(family, d, int(size), rng, arity)
            q_eff = math.inf if family == "delta_plus_constant" else q
            exps = [p] + [q_eff] * (arity - 1)
            ratios.append(norm_ratio(fs, exps, r, lams))
        fit = fit_loglog(grid.sizes, ratios) if len(grid.sizes) >= 3 and min(ratios) > 0 else None
        rec = ExperimentRecord(
            "holder_sweep",
            {"d": d, "l": arity, "family": family, "p": _finite(p), "q": _finite(q), "r": _finite(r), "sizes": list(grid.sizes)},
            list(zip(grid.sizes, ratios)),
            fit,
            derived={
                "max_ratio": float(max(ratios)),
                "violates_necessary": SweepGrid.violates_necessary((p, q, r)),
                "in_claimed_region": SweepGrid.in_claimed_region((p, q, r), d),
            },
            provenance={"seed": seed},
        )
        records.append(rec)
    return records


# -------------------------------------------------------------------- Weyl

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def minor_arc_samples(N: int, n_quasi: int = 512, q_edge: int = 8) -> np.ndarray:
    """Deterministic theta samples in the minor arcs of farey_major_arcs(N).

    A golden-ratio sequence plus points just outside the edges of the major
    arcs with q <= q_edge, where minor-arc sums are largest.
    """
    arcs = farey_major_arcs(N)
    quasi = np.mod(_GOLDEN * np.arange(1, n_quasi + 1), 1.0)
    edge = [a / q + s * 1.05 / (8 * q * N) for q in range(1, q_edge + 1) for a in reduced_residues(q) for s in (-1, 1)]
    theta = np.concatenate([quasi, np.mod(edge, 1.0)])
    return theta[~arcs.contains(theta)]


def run_weyl_experiment(N_list=tuple(2**k for k in range(5, 13)), *, n_quasi: int = 512, chunk: int = 64) -> ExperimentRecord:
    """max over minor-arc samples of sup_xi |S_N(theta, xi)| against N."""
    N_list = sorted(int(N) for N in N_list)
    if len(N_list) < 5:
        raise DomainError("need at least five values of N")
    sups, contrast = [], []
    for N in N_list:
        th = minor_arc_samples(N, n_quasi)
        v = np.concatenate([sup_over_xi(N, th[i : i + chunk]) for i in range(0, th.size, chunk)])
        sups.append(float(v.max()))
        # major-arc contrast at 1/3: |S_N| ~ N q^{-1/2}
        contrast.append(abs(weyl_sum(N, 1.0 / 3.0)) / (N / math.sqrt(3.0)))
    fit = fit_loglog(N_list, sups)
    scaled = [s / N**0.6 for s, N in zip(sups, N_list)]
    return ExperimentRecord(
        "weyl",
        {"N": N_list, "n_quasi": n_quasi, "q_edge": 8},
        list(zip(N_list, sups)),
        fit,
        derived={
            "sup_over_N_0.6": scaled,
            "sup_over_N_0.6_max": float(max(scaled)),
            "major_arc_contrast": contrast,
        },
    )


# -------------------------------------------------------------- minor arcs


def alpha_p(p: float, delta: float) -> float:
    """alpha_p = 2(2/p - 1) - delta (2 - 2/p)."""
    return 2.0 * (2.0 / p - 1.0) - delta * (2.0 - 2.0 / p)


def run_error_decay_experiment(d: int = 3, N_list=(8, 16, 32, 64, 128), *, c: float = 1.0 / 16, threads: int = 1) -> ExperimentRecord:
    """Normalized minor-arc integral against N; delta_fit = minus the slope."""
    N_list = sorted(int(N) for N in N_list)
    if max(N_list) > 128:
        raise DomainError("N above 128 exceeds the quadrature budget")
    results = [minor_arc_integral(d, N, c=c, threads=threads) for N in N_list]
    normalized = [res.normalized for res in results]
    raw = [res.raw for res in results]
    fit = fit_loglog(N_list, normalized)
    raw_fit = fit_loglog(N_list, raw)
    delta = -fit.slope
    p_grid = [1.0, 1.25, 1.5, 1.75, 2.0]
    return ExperimentRecord(
        "error_decay",
        {"d": d, "N": N_list, "c": c},
        list(zip(N_list, normalized)),
        fit,
        derived={
            "delta_fit": delta,
            "raw": raw,
            "raw_slope": raw_fit.slope,
            "raw_residual": raw_fit.residual,
            "alpha_p": {str(p): alpha_p(p, delta) for p in p_grid},
            "p_threshold": (2 + delta) / (1 + delta) if delta > -1 else float("nan"),
            "nodes": [res.nodes for res in results],
        },
    )


# ----------------------------------------------------------- multipliers


def default_xi_grid(d: int, n: int = 9) -> np.ndarray:
    """Points (a/n, b/n, 0, ...) covering a two-dimensional slice of T^d."""
    g = np.arange(n) / n
    pts = np.zeros((n * n, d))
    pts[:, 0] = np.repeat(g, n)
    if d > 1:
        pts[:, 1] = np.tile(g, n)
    return pts


def run_multiplier_comparison(d: int = 3, lambda_list=(20, 36, 50), xi_grid=None, q_max: int | None = None, *, variant: str = "arithmetic") -> ExperimentRecord:
    """sup over the xi grid of |sigma_hat - M_{<= Q}| for Q = 1..q_max.

    Measurements are (lambda * 1000 + Q, error) pairs flattened for the CSV;
    the per-lambda curves and the B/M ratio at xi = 0 sit in ``derived``.
    """
    xi = default_xi_grid(d) if xi_grid is None else np.asarray(xi_grid, dtype=np.float64)
    surfaces, ratios, decay, trend = {}, {}, {}, {}
    measurements = []
    for lam in lambda_list:
        N = math.isqrt(lam)
        qm = min(q_max or N, N)
        exact = sigma_hat_exact(d, lam, xi)
        curves = {}
        for var in dict.fromkeys((variant, "literal")):
            _, layers = multiplier_M(lam, N, d, xi, qm, variant=var, return_layers=True)
            partial = np.cumsum(layers, axis=0)
            curves[var] = [float(np.abs(exact - partial[k]).max()) for k in range(qm)]
        surfaces[str(lam)] = curves
        errs = curves[variant]
        measurements += [(lam * 1000 + Q, e) for Q, e in zip(range(1, qm + 1), errs)]
        slope = float(np.polyfit(np.log(np.arange(1, qm + 1)), np.log(errs), 1)[0]) if qm > 1 else 0.0
        trend[str(lam)] = {"first": errs[0], "last": errs[-1], "slope": slope, "decreasing": errs[-1] < errs[0] and slope < 0}
        zero = np.zeros(d)
        b = multiplier_B(1, 1, lam, N, d, zero)
        m1 = multiplier_M_term(1, 1, lam, d, zero, variant="arithmetic")
        ratios[str(lam)] = {"B": [b.real, b.imag], "M_q1": [m1.real, m1.imag], "ratio": abs(b) / abs(m1)}
        t = np.linspace(0.0, 0.25, 26)
        pts = np.zeros((t.size, d))
        pts[:, 0] = t
        env = np.abs(sigma_hat_exact(d, lam, pts)) * (1 + math.sqrt(lam) * t) ** ((2 * d - 1) / 2)
        decay[str(lam)] = float(env.max())
    return ExperimentRecord(
        "multiplier",
        {"d": d, "lambda": list(lambda_list), "q_max": q_max, "variant": variant, "xi_points": int(xi.shape[0])},
        measurements,
        None,
        derived={"sup_error": surfaces, "trend": trend, "B_over_M": ratios, "decay_constant": decay},
    )
