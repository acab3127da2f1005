"""Concrete families, scalar formula pack, and Blaschke specifications."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from schlicht.errors import HypothesisError
from schlicht.maps import (BlaschkeSpec, SchwarzCandidate, a_bound, b_bound,
                           blaschke_eval, delta, lemma31_upper, make_example32,
                           make_f_a, make_f_theta, make_from_omega,
                           make_g_threefold, r_squared, re_n_boundary, t_zero,
                           u_func, u_prime, v_integral, w_func, w_prime)
from schlicht.membership import u_series
from schlicht.series import TruncatedSeries


# -- scalar formula pack -----------------------------------------------------

def test_v_endpoints():
    assert abs(v_integral(1.0) - 1.0) < 1e-10
    assert abs(v_integral(1e-9) - 0.5) < 1e-8


def test_v_series_fallback_matches_quadrature():
    for a in (1e-4, 5e-4, 2e-3):
        oracle = quad(lambda t: (t + a) / (1.0 + a * t), 0.0, 1.0,
                      epsabs=1e-14, epsrel=1e-14)[0]
        assert abs(v_integral(a) - oracle) < 1e-12


def test_w_endpoints_and_slope():
    assert abs(w_func(1e-12) - 1.0) < 1e-10
    assert abs(w_func(1.0) - 1.0) < 1e-10
    assert abs(w_prime(1.0) - (4.0 * math.log(2.0) - 3.0)) < 1e-10


def test_delta_closed_form():
    expected = (3.0 - 4.0 * math.log(2.0)) / (4.0 * math.log(2.0) - 2.0)
    assert abs(delta() - expected) < 1e-12
    assert abs(delta() - 0.29435) < 1e-5


def test_threshold_ratio_approaches_delta():
    # (w(a) - 1)/(1 - v(a)^2) increases toward delta as a -> 1.
    vals = [(w_func(a) - 1.0) / (1.0 - v_integral(a) ** 2)
            for a in (0.9, 0.99, 0.999, 0.99999)]
    assert all(x < y for x, y in zip(vals, vals[1:]))
    assert abs(vals[-1] - delta()) < 1e-5


def test_u_func_negative_and_slope_consistent():
    assert abs(u_func(0.0)) < 1e-15
    for a in (0.2, 0.5, 0.8, 1.0):
        assert u_func(a) < 0.0
    h = 1e-6
    for a in (0.2, 0.5, 0.8):
        fd = (u_func(a + h) - u_func(a - h)) / (2.0 * h)
        assert abs(fd - u_prime(a)) < 1e-7


def test_bound_zeros_forced_by_formula():
    assert abs(a_bound(1.0, math.sqrt(2.0) - 1.0)) < 1e-14
    assert abs(b_bound(1.0, 0.5)) < 1e-14


def test_b_bound_arcsin_identity():
    lam = 0.37
    for r in np.linspace(0.0, 1.0, 257):
        lhs = b_bound(r, lam)
        rhs = math.cos(3.0 * math.asin(lam * r * r))
        assert abs(lhs - rhs) < 1e-12


def test_r_squared_at_origin_and_t_zero():
    assert abs(r_squared(0.7, 0.4, 0.0) - 0.16) < 1e-14
    lam = 0.3
    theta0 = math.acos(2.0 * lam / (1.0 + lam))
    assert t_zero(theta0, lam) == pytest.approx(0.0, abs=1e-15)


def test_lemma_upper_equals_one_plus_two_t_zero(rng):
    # Relative tolerance: both sides blow up as lam -> 1, theta0 -> 0.
    for _ in range(200):
        lam = rng.uniform(0.05, 0.999)
        theta0 = rng.uniform(0.0, math.acos(2.0 * lam / (1.0 + lam)))
        lhs = lemma31_upper(theta0, lam)
        rhs = 1.0 + 2.0 * t_zero(theta0, lam)
        assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


def test_re_n_boundary_floor():
    t = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
    for lam in (0.3, 0.5, 0.9):
        vals = re_n_boundary(lam, t)
        assert float(np.min(vals)) >= (1.0 - lam) ** 3 - 1e-12


# -- f_theta ------------------------------------------------------------------

def test_f_theta_coefficients_partial_fraction():
    f = make_f_theta(0.5, 0.0)
    expected = np.cumsum(0.5 ** np.arange(12))
    for n in range(1, 12):
        assert abs(f.series[n] - expected[n]) < 1e-12
    assert abs(f.series[2] - 1.75) < 1e-12


def test_f_theta_lambda_one_is_koebe_like():
    f = make_f_theta(1.0, 0.0)   # z/(1 - z)^2
    for n in range(1, 10):
        assert abs(f.series[n] - (n + 1)) < 1e-10


def test_f_theta_u_series_exact():
    for lam, theta in ((0.5, 0.0), (0.3, 1.1)):
        f = make_f_theta(lam, theta)
        u = u_series(f).trimmed_coeffs(tol=1e-13)
        assert u.size == 3
        assert abs(u[2] + lam * np.exp(2j * theta)) < 1e-12


def test_f_theta_inverse_times_series_is_one():
    f = make_f_theta(0.4, 0.9)
    prod = f.inverse_series.mul(f.series)
    one = np.zeros(prod.coeffs.size, dtype=complex)
    one[0] = 1.0
    np.testing.assert_allclose(prod.coeffs, one, atol=1e-12)


def test_f_theta_rotation_closure():
    # e^{-i phi} f_theta(e^{i phi} z) = f_{theta + phi}: a_n picks up e^{i(n-1)phi}.
    lam, theta, phi = 0.5, 0.3, 0.8
    f = make_f_theta(lam, theta)
    g = make_f_theta(lam, theta + phi)
    for n in range(1, 10):
        assert abs(f.series[n] * np.exp(1j * n * phi) - g.series[n]) < 1e-12


def test_f_theta_inverse_composes_target():
    # z/f_theta = (1 - w)(1 - lam w) at w = e^{i theta} z.
    lam, theta = 0.6, 0.4
    target = (TruncatedSeries.from_coeffs([1.0, -1.0], order=64)
              .mul(TruncatedSeries.from_coeffs([1.0, -lam], order=64)))
    inner = TruncatedSeries.monomial(np.exp(1j * theta), 1, 64)
    got = target.compose(inner)
    f = make_f_theta(lam, theta)
    np.testing.assert_allclose(got.coeffs, f.inverse_series.coeffs, atol=1e-12)


# -- g, example32, f_a --------------------------------------------------------

def test_g_threefold_symmetry(rng):
    g = make_g_threefold()
    z = 0.8 * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, 100))
    rot = np.exp(2j * np.pi / 3.0)
    np.testing.assert_allclose(g(rot * z), rot * g(z), atol=1e-12)


def test_g_radial_limit_two_thirds():
    g = make_g_threefold()
    assert abs(g(1.0 - 1e-9) - 2.0 / 3.0) < 1e-8


def test_g_u_series_is_minus_z_cubed():
    u = u_series(make_g_threefold()).trimmed_coeffs(tol=1e-13)
    assert u.size == 4
    np.testing.assert_allclose(u, [0, 0, 0, -1.0], atol=1e-13)


def test_example32_u_series_and_a2():
    for lam, k in ((0.5, 2), (0.25, 3)):
        f = make_example32(lam, k)
        u = u_series(f).trimmed_coeffs(tol=1e-13)
        assert u.size == k + 2
        assert abs(u[k + 1] + lam) < 1e-13
    assert abs(make_example32(0.5, 2).series[1] - 1.25) < 1e-12


def test_f_a_second_and_third_coefficients():
    lam, a = 0.15, 0.5
    f = make_f_a(lam, a)
    v = v_integral(a)
    assert abs(f.series[1] - (1.0 + lam * v)) < 1e-10
    a3_closed = 1.0 + lam * (2.0 * v - a) + (lam * v) ** 2
    assert abs(f.series[2] - a3_closed) < 1e-8
    assert f.series[2].real > 1.0 + lam + lam * lam
    assert abs(a3_closed - 1.17390) < 5e-5


def test_f_a_u_series_is_moebius_integrand():
    lam, a = 0.2, 0.5
    f = make_f_a(lam, a)
    u = u_series(f)
    omega = SchwarzCandidate.moebius_integrand(a).series
    expected = -lam * np.concatenate([[0.0, 0.0], omega.coeffs[:-2]])
    np.testing.assert_allclose(u.coeffs, expected, atol=1e-12)


def test_moebius_integrand_primitive_matches_closed_form():
    a = 0.5
    cand = SchwarzCandidate.moebius_integrand(a)
    prim = cand.series.truncate(63).integrate0()
    z = 0.3
    closed = z / a + ((a * a - 1.0) / (a * a)) * math.log(1.0 + a * z)
    assert abs(prim.eval(z) - closed) < 1e-12
    oracle = quad(lambda t: (t + a) / (1.0 + a * t), 0.0, z,
                  epsabs=1e-14, epsrel=1e-14)[0]
    assert abs(prim.eval(z) - oracle) < 1e-12


# -- representation-driven construction ---------------------------------------

def test_from_omega_zero_gives_identity():
    f = make_from_omega(0.5, 0.0, SchwarzCandidate.monomial(0.0, 1))
    assert abs(f(0.37 + 0.2j) - (0.37 + 0.2j)) < 1e-13


def test_from_omega_constant_rigid_case():
    theta, lam = 0.9, 0.6
    f = make_from_omega(lam, 0.0, SchwarzCandidate.monomial(np.exp(1j * theta), 0))
    inv = f.inverse_series.trimmed_coeffs(tol=1e-14)
    assert inv.size == 3
    assert abs(inv[2] - lam * np.exp(1j * theta)) < 1e-14


def test_from_omega_linear_density():
    f = make_from_omega(0.3, 0.0, SchwarzCandidate.monomial(1.0, 1))
    inv = f.inverse_series.trimmed_coeffs(tol=1e-14)
    np.testing.assert_allclose(inv, [1.0, 0.0, 0.0, 0.15], atol=1e-14)
    u = u_series(f).trimmed_coeffs(tol=1e-13)
    np.testing.assert_allclose(u, [0, 0, 0, -0.3], atol=1e-13)


def test_from_omega_rejects_bad_lambda():
    with pytest.raises(HypothesisError):
        make_from_omega(0.0, 0.0, SchwarzCandidate.monomial(1.0, 1))
    with pytest.raises(HypothesisError):
        make_from_omega(1.5, 0.0, SchwarzCandidate.monomial(1.0, 1))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=1, max_size=5),
       st.floats(0.05, 1.0))
def test_master_identity_random_polynomial_omega(coeffs, lam):
    # U_f = -lam z^2 omega(z), coefficientwise, for polynomial omega scaled
    # into the Schwarz class.
    arr = np.asarray(coeffs, dtype=complex)
    norm = np.sum(np.abs(arr))
    if norm > 1.0:
        arr = arr / norm
    omega = SchwarzCandidate.from_series(TruncatedSeries.from_coeffs(arr, order=62))
    f = make_from_omega(lam, 0.0, omega)
    u = u_series(f)
    expected = -lam * np.concatenate([[0.0, 0.0], arr,
                                      np.zeros(u.coeffs.size - 2 - arr.size)])
    np.testing.assert_allclose(u.coeffs, expected, atol=1e-12)


# -- Blaschke specifications ---------------------------------------------------

def test_blaschke_zero_inequalities():
    b1 = BlaschkeSpec.b1(40)
    n = np.arange(1, 41)
    dist = np.abs(1.0 - b1.zeros())
    assert np.all(dist >= (math.sqrt(15.0) / (2.0 * math.pi)) * 2.0 ** -n)
    b2 = BlaschkeSpec.b2(50)
    dist2 = np.abs(1.0 - b2.zeros()) ** 2
    n = np.arange(1, 51)
    # gap^2 <= |1 - a_n|^2 and the gap itself is exactly 2^{-2n}
    np.testing.assert_allclose(b2.gaps(), 2.0 ** (-2.0 * n), rtol=0.0)
    assert np.all(dist2 + 1e-18 >= b2.gaps() ** 2)


def test_blaschke_sums_and_tails():
    b1 = BlaschkeSpec.b1(40)
    assert abs(b1.blaschke_sum() - (1.0 / 15.0) * (1.0 - 16.0 ** -40.0)) < 1e-15
    assert b1.tail_bound() < 1e-40
    b2 = BlaschkeSpec.b2(50)
    assert abs(b2.blaschke_sum() - (1.0 / 3.0) * (1.0 - 4.0 ** -50.0)) < 1e-15


def test_blaschke_eval_basics():
    b1 = BlaschkeSpec.b1(30)
    assert blaschke_eval(b1, 0.0) == 0.0
    assert abs(blaschke_eval(b1, 0.9)) < 1.0
    zs = np.array([0.3, 0.5j, -0.7])
    assert np.all(np.abs(blaschke_eval(b1, zs)) < 1.0)
