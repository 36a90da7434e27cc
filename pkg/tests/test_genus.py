"""Fixed-point genus: numeric sums, the exact circle restriction, v-expansion and regularization."""

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from alegenus import genus, numeric
from alegenus.genus import NearPoleError
from alegenus.laurent import CircleRational, LaurentPoly, YLaurent
from alegenus.series import SeriesError

TAU = 0.1 + 1.1j
Z = 0.23 + 0.07j
T1 = 0.17 + 0.05j
T2 = -0.09 + 0.11j

points = st.tuples(
    st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.8, 1.5)),
    st.builds(complex, st.floats(0.02, 0.3), st.floats(0.02, 0.3)),
    st.builds(complex, st.floats(0.02, 0.3), st.floats(0.02, 0.3)),
    st.builds(complex, st.floats(-0.3, -0.02), st.floats(0.02, 0.3)),
)


# -- fixed points ---------------------------------------------------------------------
def test_fixed_point_data_r1_r2():
    assert genus.fixed_point_data(1).weights == (((-1, 0), (0, -1)),)
    assert genus.fixed_point_data(2).weights == (((-1, 1), (0, -2)), ((-2, 0), (1, -1)))


@pytest.mark.parametrize("r", range(1, 9))
def test_fixed_point_weights_sum(r):
    data = genus.fixed_point_data(r)
    assert len(data.weights) == r
    for w1, w2 in data.weights:
        assert (w1[0] + w2[0], w1[1] + w2[1]) == (-1, -1)


def test_fixed_point_data_rejects_zero():
    with pytest.raises(ValueError):
        genus.fixed_point_data(0)


# -- numeric genus -----------------------------------------------------------------
@pytest.mark.parametrize("r", range(1, 6))
def test_z_zero_gives_r(r):
    assert abs(genus.equivariant_genus_numeric(r, TAU, 0, T1, T2) - r) < 1e-12


def test_conifold_two_term_sum():
    th = lambda x: numeric.theta1_numeric(TAU, x)  # noqa: E731
    explicit = (th(Z - T1 + T2) / th(-T1 + T2) * th(Z - 2 * T2) / th(-2 * T2)
                + th(Z - 2 * T1) / th(-2 * T1) * th(Z + T1 - T2) / th(T1 - T2))
    assert abs(genus.equivariant_genus_numeric(2, TAU, Z, T1, T2) - explicit) < 1e-12
    assert abs(genus.conifold_numeric(TAU, Z, T1, T2) - explicit) < 1e-12


@given(points, st.integers(1, 5))
def test_t1_t2_symmetry(pt, r):
    tau, z, t1, t2 = pt
    try:
        a = genus.equivariant_genus_numeric(r, tau, z, t1, t2)
        b = genus.equivariant_genus_numeric(r, tau, z, t2, t1)
    except NearPoleError:
        return
    assert abs(a - b) < 1e-9 * max(1.0, abs(a))


def test_near_pole_error_carries_location():
    with pytest.raises(NearPoleError) as info:
        genus.equivariant_genus_numeric(2, TAU, Z, T1, T1)
    err = info.value
    assert err.fixed_point in (0, 1)
    assert err.distance < 1e-8


def test_r1_is_the_flat_plane_genus():
    th = lambda x: numeric.theta1_numeric(TAU, x)  # noqa: E731
    expected = th(Z - T1) / th(-T1) * th(Z - T2) / th(-T2)
    assert abs(genus.equivariant_genus_numeric(1, TAU, Z, T1, T2) - expected) < 1e-12


# -- circle restriction --------------------------------------------------------------
@pytest.mark.parametrize("r", [1, 2, 3])
def test_circle_numeric_closed_form(r):
    t = 0.11 + 0.04j
    th = lambda x: numeric.theta1_numeric(TAU, x)  # noqa: E731
    closed = -r * th(Z + r * t) * th(Z - r * t) / th(r * t) ** 2
    assert abs(genus.genus_circle_numeric(r, TAU, Z, t) - closed) < 1e-12


@pytest.mark.parametrize("r", [1, 2, 3])
def test_circle_exact_q0_coefficient(r):
    # r y^{-1} (1 - y s)(1 - y/s) / ((1 - s)(1 - 1/s)) with s = sigma^r
    vs = ("y", "sigma")
    one = LaurentPoly.constant(vs, 1)
    y = LaurentPoly(vs, {(2, 0): 1})
    y_inv = LaurentPoly(vs, {(-2, 0): 1})
    s = LaurentPoly(vs, {(0, 2 * r): 1})
    s_inv = LaurentPoly(vs, {(0, -2 * r): 1})
    num = y_inv * (one - y * s) * (one - y * s_inv) * r
    den = (one - s) * (one - s_inv)
    series = genus.genus_circle_exact(r, 3)
    c = series.coefficient(0)
    assert c.numerator * den == num * c.denominator


@pytest.mark.parametrize("r", [1, 2, 3])
def test_circle_exact_symmetries(r):
    series = genus.genus_circle_exact(r, 3)
    for e, c in series.terms().items():
        assert c.reflect_sigma() == c
    const = CircleRational(LaurentPoly.constant(("y", "sigma"), r))
    assert series.coefficient(0).at_y_equals_one() == const
    for e in list(series.terms())[1:]:
        assert series.coefficient(e).at_y_equals_one().is_zero()


@pytest.mark.parametrize("r", [1, 2, 4])
def test_circle_exact_matches_numeric(r):
    series = genus.genus_circle_exact(r, 20)
    t = 0.07 + 0.03j
    a = genus.circle_value_exact(series, TAU, Z, t)
    b = genus.genus_circle_numeric(r, TAU, Z, t)
    assert abs(a - b) < 1e-11 * max(1.0, abs(b))


# -- v-expansion ---------------------------------------------------------------------
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_alpha0_closed_form(r):
    ex = genus.v_expand(r, 8, 4)
    assert ex.alpha(0) == genus.alpha0_hat_closed(r, 8)
    assert ex.series.lowest_order == -2
    assert not ex.odd_coefficients()


def test_alpha0_hand_leading_factor():
    # q^0 of (1/r)(theta_1/eta^3)^2 = (1/r)(-y^{-1})(1 - y)^2
    for r in (1, 2, 3):
        q0 = genus.v_expand(r, 2, 0).alpha(0).coefficient(0)
        assert q0 == YLaurent({-1: Fraction(-1, r), 0: Fraction(2, r), 1: Fraction(-1, r)})


@pytest.mark.parametrize("r", [1, 2, 3])
def test_alpha2_over_alpha0_is_minus_r2_P(r):
    ex = genus.v_expand(r, 8, 4)
    assert ex.alpha(1) == genus.alpha_hat_closed(r, 1, 8)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_higher_alpha_are_eisenstein_multiples(r):
    ex = genus.v_expand(r, 6, 10)
    for g in range(2, 7):
        assert ex.alpha(g) == genus.alpha_hat_closed(r, g, 6)


def test_alpha_coefficients_have_integer_y_exponents():
    ex = genus.v_expand(3, 6, 6)
    for a in ex.alpha_hat.values():
        assert all(c.has_integer_exponents() for c in a.coeffs)


def test_v_expand_requests_beyond_order():
    ex = genus.v_expand(2, 4, 2)
    with pytest.raises(SeriesError):
        ex.alpha(3)
    with pytest.raises(ValueError):
        genus.v_expand(2, 4, 3)


def test_v_expansion_matches_numeric_laurent_coefficients():
    # alpha_{2g} from a contour integral of the numeric circle genus around t = 0
    r = 2
    ex = genus.v_expand(r, 16, 4)
    rad = 0.03
    n = 64
    for g in (0, 1, 2):
        k = 2 * g - 2
        acc = 0j
        for j in range(n):
            t = rad * cmath.exp(2j * math.pi * j / n)
            acc += genus.genus_circle_numeric(r, TAU, Z, t) / t ** k
        numeric_coeff = acc / n
        exact = genus.unhatted_factor(k) * genus.evaluate_y_series(ex.alpha(g), TAU, Z)
        assert abs(numeric_coeff - exact) < 1e-8 * max(1.0, abs(exact))


# -- regularized and K3 -------------------------------------------------------------
def test_k3_q0_q1():
    k3 = genus.k3_elliptic_genus(2)
    assert k3.coefficient(0) == YLaurent({-1: 2, 0: 20, 1: 2})
    assert k3.coefficient(1) == YLaurent({-2: 20, -1: -128, 0: 216, 1: -128, 2: 20})


def test_k3_value_24_and_parity():
    k3 = genus.k3_elliptic_genus(6)
    for e, c in k3.terms().items():
        assert c.reflect() == c
        total = sum(c.terms.values())
        assert total == (24 if e == 0 else 0)


def test_k3_numeric_matches_exact():
    k3 = genus.k3_elliptic_genus(20)
    assert abs(genus.evaluate_y_series(k3, TAU, Z) - genus.k3_numeric(TAU, Z)) < 1e-11


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_regularized_is_scaled_k3(r):
    reg = genus.regularized_genus(r, 8)
    assert reg == genus.k3_elliptic_genus(8).scale(Fraction(r, 24))
    assert reg.coefficient(0) == YLaurent({-1: Fraction(r, 12), 0: Fraction(10 * r, 12), 1: Fraction(r, 12)})


def test_regularized_numeric_agrees():
    reg = genus.regularized_genus(3, 20)
    assert abs(genus.evaluate_y_series(reg, TAU, Z) - genus.regularized_numeric(3, TAU, Z)) < 1e-11


def test_regularized_rejects_bad_r():
    with pytest.raises(ValueError):
        genus.regularized_genus(0, 2)
