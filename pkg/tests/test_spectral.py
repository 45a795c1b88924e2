import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from bisphere.errors import DomainError, QuadratureError, UndefinedAverageError
from bisphere.spectral import (
    Cutoff,
    FareyArc,
    box_phase_ft,
    degenerate_sum,
    farey_major_arcs,
    farey_sequence,
    gauss_layer_series,
    gauss_sum,
    gauss_sum_1d,
    generating_product,
    minor_arc_integral,
    multiplier_A,
    multiplier_B,
    multiplier_M,
    multiplier_M_term,
    plateau,
    reduced_residues,
    sigma_hat_exact,
    sphere_ft,
    sup_over_xi,
    totients,
    weyl_sum,
)
from bisphere.lattice import get_table
from bisphere.spectral.bessel import bessel_j
from bisphere.spectral.gauss import gauss_sum_table
from bisphere.spectral.weyl import weyl_sums_on_grid
from oracles import brute_sigma_hat, bump_ft_fft, e, euler_phi

# ------------------------------------------------------------------ Weyl sums


@pytest.mark.parametrize("N", [0, 1, 5, 17])
def test_weyl_trivial(N):
    assert weyl_sum(N, 0.0, 0.0) == pytest.approx(N + 1)


def test_weyl_examples():
    assert weyl_sum(4, 0.5, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert abs(weyl_sum(3, 0.0, 0.5)) < 1e-12


def test_weyl_negative_N():
    with pytest.raises(DomainError):
        weyl_sum(-1, 0.1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 60), st.floats(-3, 3), st.floats(-3, 3))
def test_weyl_matches_direct_and_bound(N, theta, xi):
    direct = sum(e(theta * u * u + xi * u) for u in range(N + 1))
    s = weyl_sum(N, theta, xi)
    assert abs(s - direct) < 1e-9 * (N + 1)
    assert abs(s) <= N + 1 + 1e-9


def test_generating_product_examples():
    N = 6
    assert generating_product(N, 0.0, [0, 0, 0]) == pytest.approx((N + 1) ** 6)
    assert generating_product(4, 0.5, [0, 0, 0]) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.floats(-1, 1), st.lists(st.floats(-1, 1), min_size=1, max_size=4))
def test_generating_product_conjugate_symmetry(N, theta, xi):
    a = generating_product(N, theta, xi)
    b = generating_product(N, -theta, [-x for x in xi])
    assert abs(a - b.conjugate()) <= 1e-9 * max(1.0, abs(a))


def test_weyl_grid_matches_direct():
    N, theta = 13, np.array([0.123, 0.77])
    grid = weyl_sums_on_grid(N, theta, 8 * N)
    xi = np.arange(8 * N) / (8 * N)
    direct = np.array([[weyl_sum(N, t, x) for x in xi] for t in theta])
    np.testing.assert_allclose(grid, direct, atol=1e-10)


def test_sup_over_xi_refines_grid():
    N = 40
    theta = np.array([0.1234, 0.3019, 0.7071])
    sup = sup_over_xi(N, theta)
    dense = np.abs(weyl_sums_on_grid(N, theta, 200 * N)).max(axis=1)
    assert np.all(sup >= np.abs(weyl_sums_on_grid(N, theta)).max(axis=1) - 1e-12)
    np.testing.assert_allclose(sup, dense, rtol=1e-4)
    assert isinstance(sup_over_xi(N, 0.25), float)


# ----------------------------------------------------------------------- arcs


def test_arcs_examples():
    a1 = farey_major_arcs(1)
    assert [(x.a, x.q) for x in a1] == [(1, 1)] and a1.arcs[0].half_width == Fraction(1, 8)
    a2 = farey_major_arcs(2)
    assert {(x.a, x.q): x.half_width for x in a2} == {(1, 1): Fraction(1, 16), (1, 2): Fraction(1, 32)}
    assert len(farey_major_arcs(4)) == 6


@pytest.mark.parametrize("N", [1, 2, 3, 7, 10, 31])
def test_arcs_count_and_measure(N):
    arcs = farey_major_arcs(N)
    assert len(arcs) == sum(euler_phi(q) for q in range(1, N + 1))
    assert arcs.measure() < 1
    assert arcs.is_disjoint()
    minor = arcs.minor_intervals()
    assert minor[:, 1].sum() - minor[:, 0].sum() == pytest.approx(1 - float(arcs.measure()), abs=1e-12)


def test_farey_sequence_small():
    assert farey_sequence(3) == [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)]


def test_arc_validation():
    with pytest.raises(DomainError):
        FareyArc(q=4, a=2, N=5)
    with pytest.raises(DomainError):
        FareyArc(q=6, a=1, N=5)
    with pytest.raises(DomainError):
        farey_major_arcs(0)


def test_arc_contains_and_csv():
    arcs = farey_major_arcs(5)
    assert arcs.contains(np.array([0.0, 0.5, 0.999, 0.2 + 1 / 200]))[:3].all()
    mid = arcs.minor_intervals().mean(axis=1)
    assert not arcs.contains(mid).any()
    lines = arcs.to_csv().splitlines()
    assert lines[0] == "a,q,center,half_width" and len(lines) == len(arcs) + 1


# ----------------------------------------------------------------------- Gauss


def test_gauss_examples():
    assert gauss_sum_1d(0, 1, 1) == pytest.approx(1)
    assert gauss_sum_1d(0, 1, 3) == pytest.approx(1j / math.sqrt(3))
    assert abs(gauss_sum_1d(0, 1, 2)) < 1e-15


def test_gauss_requires_coprime():
    with pytest.raises(DomainError):
        gauss_sum_1d(0, 2, 4)


@pytest.mark.parametrize("q", [3, 5, 9, 15, 21, 49])
def test_gauss_odd_magnitude(q):
    for a in reduced_residues(q):
        row = gauss_sum_table(a, q)
        np.testing.assert_allclose(np.abs(row), q**-0.5, atol=1e-12)


@pytest.mark.parametrize("q", [2, 4, 6, 8, 12, 16])
def test_gauss_even_bound(q):
    for a in reduced_residues(q):
        assert np.all(np.abs(gauss_sum_table(a, q)) <= math.sqrt(2 / q) + 1e-12)


def test_gauss_table_and_product():
    q, a = 7, 3
    row = gauss_sum_table(a, q)
    for l in range(q):
        assert row[l] == pytest.approx(gauss_sum_1d(l, a, q))
    assert gauss_sum([1, 2, 3], a, q) == pytest.approx(row[1] * row[2] * row[3])
    assert gauss_sum_1d(-1, a, q) == pytest.approx(row[q - 1])


def test_degenerate_sum_examples():
    assert degenerate_sum(0, 5) == 1
    assert degenerate_sum((3, 0, 0), 3) == 1
    assert degenerate_sum((1, 0, 0), 2) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=3), st.integers(1, 6))
def test_degenerate_sum_full_orthogonality(m, q):
    # q^{-d} sum_{z mod q} e(m.z / q), summed directly
    total = 1.0 + 0j
    for mi in m:
        total *= sum(e(mi * z / q) for z in range(q)) / q
    assert abs(total - degenerate_sum(m, q)) < 1e-12


def test_totients():
    phi = totients(60)
    assert [int(phi[n]) for n in range(1, 61)] == [euler_phi(n) for n in range(1, 61)]


def test_layer_series_monotone():
    s = gauss_layer_series(3, 3.5, 100)
    assert s[0] == 1.0 and np.all(np.diff(s) > 0)


# -------------------------------------------------------------------- cutoffs


def test_plateau_shape():
    t = np.linspace(-3, 3, 6001)
    v = plateau(t)
    assert np.all((v >= 0) & (v <= 1))
    assert np.all(v[np.abs(t) <= 1] == 1) and np.all(v[np.abs(t) >= 2] == 0)
    np.testing.assert_array_equal(v, plateau(-t))


def test_cutoff_integral_and_companion():
    c = Cutoff(0.7)
    val, _ = integrate.quad(lambda x: float(c(x)), -2, 2, points=[-1.4, -0.7, 0.7, 1.4])
    assert val == pytest.approx(c.integral(), rel=1e-10)
    x = np.linspace(-3, 3, 1001)
    np.testing.assert_array_equal(c.companion()(x) * c(x), c(x))
    assert c.tensor(np.zeros((1, 3)))[0] == 1.0


# --------------------------------------------------------------------- Bessel


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.0, 3.5])
def test_bessel_against_scipy(nu):
    x = np.concatenate([np.linspace(0, 30, 301), np.linspace(30, 700, 200)])
    np.testing.assert_allclose(bessel_j(nu, x), special.jv(nu, x), atol=1e-10)


def test_sphere_ft_zero_and_circle():
    assert sphere_ft(6, 1.0, 0.0) == 1.0
    s = np.array([0.0, 0.13, 0.5, 1.7, 9.3])
    np.testing.assert_allclose(sphere_ft(2, 1.0, s), special.j0(2 * np.pi * s), atol=1e-12)
    # average of e(s cos t) over the unit circle
    for si in s:
        val, _ = integrate.quad(lambda t: math.cos(2 * math.pi * si * math.cos(t)), 0, 2 * math.pi, limit=200)
        assert sphere_ft(2, 1.0, si) == pytest.approx(val / (2 * math.pi), abs=1e-10)


def test_sphere_ft_matches_closed_constant():
    # c_k = 2^nu Gamma(nu + 1), used here only as a test oracle
    for k in (3, 4, 6, 8):
        nu = (k - 2) / 2
        s = np.linspace(0.01, 5, 50)
        ref = 2**nu * math.gamma(nu + 1) * special.jv(nu, 2 * np.pi * s) / (2 * np.pi * s) ** nu
        np.testing.assert_allclose(sphere_ft(k, 1.0, s), ref, atol=1e-11)


def test_sphere_ft_decay_bounded():
    s = np.linspace(0, 100, 20001)
    env = np.abs(sphere_ft(6, 1.0, s)) * (1 + s) ** 2.5
    assert np.isfinite(env).all() and env.max() < 10


# --------------------------------------------------------------- oscillatory


def test_box_phase_no_phase():
    for N in (1.0, 3.0, 7.5):
        assert box_phase_ft(0.0, N, 0.0) == pytest.approx(3.0 * N, rel=1e-12)


def test_box_phase_matches_fft_transform():
    N = 4.0
    k = np.arange(-20, 21)
    eta = k / (16.0 * N)  # exact FFT frequencies of the oracle grid (period 16)
    ours = box_phase_ft(0.0, N, eta)
    ref = bump_ft_fft(plateau, N, eta)
    np.testing.assert_allclose(ours, ref, atol=1e-9 * 3 * N)


@settings(max_examples=25, deadline=None)
@given(st.floats(-0.05, 0.05), st.floats(-2, 2), st.floats(1, 6))
def test_box_phase_conjugate_symmetry(beta, eta, N):
    a = box_phase_ft(beta, N, eta)
    b = box_phase_ft(-beta, N, -eta)
    assert abs(a - b.conjugate()) < 1e-10 * 3 * N


def test_box_phase_against_quad():
    N, beta, eta = 3.0, 0.02, 0.3

    def f(t, part):
        v = plateau(t / N) * e(beta * t * t - eta * t)
        return v.real if part == 0 else v.imag

    re, _ = integrate.quad(f, -2 * N, 2 * N, args=(0,), limit=400, epsabs=1e-13)
    im, _ = integrate.quad(f, -2 * N, 2 * N, args=(1,), limit=400, epsabs=1e-13)
    assert box_phase_ft(beta, N, eta) == pytest.approx(re + 1j * im, abs=1e-10)


def test_box_phase_failure_is_loud():
    with pytest.raises(QuadratureError) as info:
        box_phase_ft(0.3, 5.0, 0.1, rtol=1e-30, max_levels=1)
    assert info.value.levels == 1
    with pytest.raises(DomainError):
        box_phase_ft(0.0, 0.0, 0.0)


# --------------------------------------------------------------------- symbol


def test_sigma_hat_examples():
    xi = np.array([0.1, 0.27, 0.4])
    ref = (6 + 2 * np.cos(2 * np.pi * xi).sum()) / 12
    assert sigma_hat_exact(3, 1, xi) == pytest.approx(ref, abs=1e-14)
    assert abs(sigma_hat_exact(3, 1, [0.5, 0.5, 0.5])) < 1e-14
    assert sigma_hat_exact(2, 13, [0, 0]) == pytest.approx(1, abs=1e-15)


def test_sigma_hat_undefined():
    with pytest.raises(UndefinedAverageError):
        sigma_hat_exact(1, 7, [0.0])  # 7 is not a sum of two squares


@pytest.mark.parametrize("d, lams", [(1, [1, 5, 13, 25, 50]), (2, [1, 3, 10, 29, 50]), (3, [1, 2, 7, 11])])
def test_sigma_hat_brute_force(d, lams):
    rng = np.random.default_rng(d)
    for lam in lams:
        for xi in rng.random((3, d)):
            assert abs(sigma_hat_exact(d, lam, xi) - brute_sigma_hat(d, lam, xi)) < 1e-12


def test_sigma_hat_batch_and_bound():
    rng = np.random.default_rng(5)
    xi = rng.random((50, 3))
    vals = sigma_hat_exact(3, 30, xi)
    assert vals.shape == (50,) and np.all(np.abs(vals) <= 1 + 1e-12)
    assert vals[7] == pytest.approx(sigma_hat_exact(3, 30, xi[7]), abs=1e-14)


# ------------------------------------------------------------- multipliers


def test_multiplier_B_collapse_at_q1():
    lam, N, d = 9, 3, 3
    b = multiplier_B(1, 1, lam, N, d, np.zeros(d))
    n_lam = get_table(2 * d, lam).count(lam)

    def integrand(beta, part):
        v = e(-lam * beta) * box_phase_ft(beta, N, 0.0) ** (2 * d)
        return v.real if part == 0 else v.imag

    w = 1 / (8 * N)
    re, _ = integrate.quad(integrand, -w, w, args=(0,), limit=200, epsabs=1e-12)
    im, _ = integrate.quad(integrand, -w, w, args=(1,), limit=200, epsabs=1e-9)  # ~0 by symmetry
    assert b == pytest.approx((re + 1j * im) / n_lam, rel=1e-7)


def test_multiplier_B_psi2_removed_identical():
    xi = np.array([0.1, 0.0, 0.3])
    a = multiplier_B(1, 2, 16, 4, 3, xi)
    b = multiplier_B(1, 2, 16, 4, 3, xi, psi2=False)
    assert a == pytest.approx(b, abs=1e-15)


def test_multiplier_A_minus_B_shrinks_with_cutoff_scale():
    xi = np.array([0.5, 0.1, 0.0])
    A = multiplier_A(1, 2, 16, 4, 3, xi)
    diffs = [abs(A - multiplier_B(1, 2, 16, 4, 3, xi, psi_scale=s)) for s in (0.25, 0.5, 1.0, 2.0)]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(diffs, diffs[1:]))
    assert diffs[-1] < diffs[0] / 10


def test_multiplier_validation():
    with pytest.raises(DomainError):
        multiplier_A(2, 4, 16, 4, 3, np.zeros(3))
    with pytest.raises(DomainError):
        multiplier_B(1, 5, 16, 4, 3, np.zeros(3))
    with pytest.raises(DomainError):
        multiplier_M(16, 4, 3, np.zeros(3), q_max=5)


def test_multiplier_M_q1_at_zero():
    assert multiplier_M_term(1, 1, 17, 3, np.zeros(3)) == pytest.approx(1.0)
    assert multiplier_M(17, 4, 3, np.zeros(3), 1) == pytest.approx(1.0)


def test_multiplier_M_layers_and_gauss_bound():
    d, lam, N = 3, 50, 7
    rng = np.random.default_rng(2)
    xi = rng.random((40, d))
    total, layers = multiplier_M(lam, N, d, xi, N, return_layers=True)
    np.testing.assert_allclose(layers.sum(axis=0), total, atol=1e-14)
    for q in range(1, N + 1):
        for a in reduced_residues(q):
            term = multiplier_M_term(a, q, lam, d, xi)
            assert np.all(np.abs(term) <= math.sqrt(2) ** d * q ** (-d / 2) + 1e-12)


def test_multiplier_M_arithmetic_variant_improves():
    d, lam = 3, 36
    g = np.arange(6) / 6
    xi = np.array([(a, b, 0.0) for a in g for b in g])
    exact = sigma_hat_exact(d, lam, xi)
    _, layers = multiplier_M(lam, 6, d, xi, 6, variant="arithmetic", return_layers=True)
    partial = np.cumsum(layers, axis=0)
    errs = [np.abs(exact - partial[k]).max() for k in range(6)]
    assert errs[-1] < errs[0]


def test_minor_arc_integral_small():
    res = minor_arc_integral(3, 8)
    assert res.raw >= 0 and res.normalized >= 0
    assert res.minor_measure == pytest.approx(1 - float(farey_major_arcs(8).measure()), abs=1e-12)
    with pytest.raises(DomainError):
        minor_arc_integral(3, 8, c=0.1)
