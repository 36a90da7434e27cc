"""Special functions checked against independent sources: sympy, mpmath and classical series."""

import cmath
import math
import threading
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from alegenus import numeric
from alegenus.laurent import YLaurent, YRationalFunction
from alegenus.special import (
    EISENSTEIN_CACHE,
    ThetaArgument,
    bernoulli,
    dedekind_eta_qexp,
    divisor_sigma,
    eisenstein,
    eisenstein_lambert,
    eulerian,
    g_hat,
    log_one_minus_exp,
    theta1_qexp,
    weierstrass_P_hat_derivative,
    weierstrass_P_hat_wseries,
    weierstrass_P_hat_yform,
)

TAU = 0.1 + 1.1j
Z = 0.23 + 0.07j


def mp_theta1(tau, z):
    return complex(mpmath.jtheta(1, mpmath.pi * z, cmath.exp(1j * math.pi * tau)))


def mp_wp(tau, z):
    nq = cmath.exp(1j * math.pi * tau)
    pi = mpmath.pi
    t2, t3 = mpmath.jtheta(2, 0, nq), mpmath.jtheta(3, 0, nq)
    val = pi ** 2 * (t2 * t3 * mpmath.jtheta(4, pi * z, nq) / mpmath.jtheta(1, pi * z, nq)) ** 2
    return complex(val - pi ** 2 / 3 * (t2 ** 4 + t3 ** 4))


taus = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.7, 1.6))
zs = st.builds(complex, st.floats(-0.5, 0.5), st.floats(-0.3, 0.3))


# -- numbers ------------------------------------------------------------------------
@pytest.mark.parametrize("n", range(0, 31))
def test_bernoulli_matches_sympy(n):
    expected = sympy.bernoulli(n)
    if n == 1:
        expected = -expected  # sympy uses B_1 = +1/2
    assert Fraction(bernoulli(n)) == Fraction(int(expected.p), int(expected.q))


def test_bernoulli_rejects_negative():
    with pytest.raises(ValueError):
        bernoulli(-1)


@given(st.integers(0, 7), st.integers(1, 400))
def test_divisor_sigma_matches_sympy(k, n):
    assert divisor_sigma(k, n) == sympy.divisor_sigma(n, k)


def test_eulerian_rows():
    assert eulerian(1) == [1]
    assert eulerian(3) == [1, 4, 1]
    assert eulerian(4) == [1, 11, 11, 1]
    assert eulerian(5) == [1, 26, 66, 26, 1]
    assert eulerian(6) == [1, 57, 302, 302, 57, 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_eulerian_power_sum_identity(n):
    x = sympy.Symbol("x")
    closed = sum(a * x ** (j + 1) for j, a in enumerate(eulerian(n))) / (1 - x) ** (n + 1)
    series = sympy.series(closed, x, 0, 11).removeO()
    assert sympy.expand(series - sum(m ** n * x ** m for m in range(1, 11))) == 0


# -- Eisenstein ---------------------------------------------------------------------
def test_e2_e4_e6_leading_coefficients():
    assert [eisenstein(1, 4).coefficient(n) for n in range(5)] == [1, -24, -72, -96, -168]
    assert [eisenstein(2, 3).coefficient(n) for n in range(4)] == [1, 240, 2160, 6720]
    assert [eisenstein(3, 2).coefficient(n) for n in range(3)] == [1, -504, -16632]


@pytest.mark.parametrize("k", range(1, 8))
def test_eisenstein_divisor_sum_equals_lambert(k):
    assert eisenstein(k, 30) == eisenstein_lambert(k, 30)


def test_e4_squared_is_e8():
    assert eisenstein(2, 20) * eisenstein(2, 20) == eisenstein(4, 20)


def test_eisenstein_numeric_agrees_with_exact():
    for k in (1, 2, 3):
        assert abs(eisenstein(k, 40).evaluate(TAU) - numeric.eisenstein_numeric(k, TAU)) < 1e-12


def test_g_hat_normalization():
    # G_hat_4 = -B_4/4! E_4 = E_4/720
    assert g_hat(2, 3) == eisenstein(2, 3).scale(Fraction(1, 720))


def test_eisenstein_cache_is_thread_safe():
    results = []

    def work():
        results.append(eisenstein(5, 60))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert 10 in EISENSTEIN_CACHE.weights()


# -- theta_1 and eta -----------------------------------------------------------------
def test_theta1_matches_triple_product_sum():
    # theta_1 = -i sum_n (-1)^n q^{(n+1/2)^2/2} y^{n+1/2}
    order = 8
    exact = theta1_qexp(ThetaArgument(), order)
    assert exact.i_power == 1
    expected = {}
    for n in range(-6, 6):
        e = Fraction((2 * n + 1) ** 2, 8)
        if e < Fraction(1, 8) + order + 1:
            expected.setdefault(e, YLaurent.zero())
            expected[e] = expected[e] + YLaurent.monomial(Fraction(2 * n + 1, 2), -1 if n % 2 == 0 else 1)
    got = exact.series.terms()
    assert got == {e: c for e, c in expected.items() if c}


def test_theta1_numeric_matches_mpmath():
    assert abs(numeric.theta1_numeric(TAU, Z) - mp_theta1(TAU, Z)) < 1e-14


@given(taus, zs)
def test_theta1_numeric_property(tau, z):
    a = numeric.theta1_numeric(tau, z)
    b = mp_theta1(tau, z)
    assert abs(a - b) < 1e-11 * max(1.0, abs(b))


def test_theta1_exact_evaluates_to_numeric():
    series = theta1_qexp(ThetaArgument(), 20)
    val = 1j * series.series.evaluate(TAU, lambda c: c.evaluate_z(Z))
    assert abs(val - numeric.theta1_numeric(TAU, Z)) < 1e-14


def test_theta1_lattice_shift():
    shifted = theta1_qexp(ThetaArgument(1, (), (1, 0)), 20)
    val = 1j * shifted.series.evaluate(TAU, lambda c: c.evaluate_z(Z))
    assert abs(val - numeric.theta1_numeric(TAU, Z + TAU)) < 1e-12


def test_eta_matches_pentagonal_numbers():
    eta = dedekind_eta_qexp(30)
    expected = {}
    for k in range(-6, 7):
        e = k * (3 * k - 1) // 2
        if e <= 30:
            expected[Fraction(1, 24) + e] = 1 if k % 2 == 0 else -1
    assert eta.terms() == expected


def test_eta_numeric_matches_q_pochhammer():
    q = cmath.exp(2j * math.pi * TAU)
    expected = cmath.exp(1j * math.pi * TAU / 12) * complex(mpmath.qp(q))
    assert abs(numeric.eta_numeric(TAU) - expected) < 1e-15


def test_theta1_prime_is_two_pi_eta_cubed():
    h = 1e-6
    deriv = (numeric.theta1_numeric(TAU, h) - numeric.theta1_numeric(TAU, -h)) / (2 * h)
    assert abs(deriv - numeric.theta1_prime0_numeric(TAU)) < 1e-8


# -- Weierstrass -------------------------------------------------------------------
def test_wp_numeric_matches_theta_quotient():
    assert abs(numeric.wp_numeric(TAU, Z) - mp_wp(TAU, Z)) < 1e-12


@given(taus, zs.filter(lambda z: abs(z) > 0.05))
def test_wp_property(tau, z):
    a = numeric.wp_numeric(tau, z)
    b = mp_wp(tau, z)
    assert abs(a - b) < 1e-9 * max(1.0, abs(b))


def test_P_hat_wseries_against_mpmath():
    series = weierstrass_P_hat_wseries(30, 30)
    z = 0.08 + 0.05j
    w = 2j * math.pi * z
    val = series.evaluate(w, lambda c: c.evaluate(TAU))
    assert abs(val - mp_wp(TAU, z) / (2j * math.pi) ** 2) < 1e-12


def test_P_hat_wseries_shape():
    s = weierstrass_P_hat_wseries(5, 8)
    assert s.lowest_order == -2
    assert s.coefficient(-2) == s.coefficient(-2).constant(s.coefficient(-2).ring, 1)
    assert s.coefficient(0).is_zero()
    assert s.coefficient(2) == g_hat(2, 5).scale(3)


def test_P_hat_derivative():
    d2 = weierstrass_P_hat_derivative(5, 6, 2)
    assert d2.singular_part().terms()[-4] == weierstrass_P_hat_wseries(5, 6).coefficient(-2).scale(6)


def test_P_hat_yform_leading_term():
    yf = weierstrass_P_hat_yform(4)
    y = YLaurent.monomial(1)
    one = YLaurent.one()
    assert yf.coefficient(0) == YRationalFunction(YLaurent.constant(Fraction(1, 12))) + YRationalFunction(y, (one - y) * (one - y))
    assert abs(yf.evaluate(TAU, lambda c: c.evaluate_z(Z)) - numeric.P_hat_numeric(TAU, Z, 4)) < 1e-6


# -- log(1 - e^v) -----------------------------------------------------------------
def test_log_one_minus_exp_coefficients():
    le = log_one_minus_exp(8)
    assert le.series.coefficient(1) == Fraction(1, 2)
    assert le.series.coefficient(2) == Fraction(1, 24)
    assert le.series.coefficient(4) == Fraction(-1, 2880)
    assert le.log_v == 1 and le.pi_i == 1


@pytest.mark.parametrize("v", [0.1, 0.05 + 0.02j, -0.07 + 0.03j])
def test_log_one_minus_exp_numeric(v):
    le = log_one_minus_exp(16)
    series = le.series.evaluate(v)
    # branch: principal logs; the pi i constant is fixed up to 2 pi i
    lhs = cmath.log(1 - cmath.exp(v)) - cmath.log(v) - series
    k = (lhs / (1j * math.pi))
    assert abs(k - round(k.real)) < 1e-12 and round(k.real) % 2 == 1


def test_reflected_sum_cancels_pi_i():
    le = log_one_minus_exp(6)
    both = le + le.reflect()
    assert both.pi_i_cancels()
    assert both.series.coefficient(1) == 0
