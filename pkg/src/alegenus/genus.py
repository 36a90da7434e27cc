"""Equivariant elliptic genus of the A-type ALE space X_r.

The full two-parameter genus is evaluated numerically.  Exact work happens
on the circle ``t1 = -t2 = t`` where every fixed point contributes the same
quotient and

    Z(tau, z; t, -t) = -r theta_1(z + r t) theta_1(z - r t) / theta_1(r t)**2.

The expansion variable is ``v = 2 pi i t`` so that all Laurent coefficients
``alpha_hat_{2g}`` (of ``v**(2g-2)``) stay rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import numeric
from .laurent import CancellationError, CircleRational, LaurentPoly, YLaurent, YRationalFunction, as_rational
from .rings import CIRCLE_RATIONAL, QQ, YLAURENT, YRATIONAL
from .series import FormalLaurentSeries, SeriesError, SeriesRing, TruncatedQSeries
from .special import ThetaArgument, dedekind_eta_qexp, g_hat, theta1_qexp, weierstrass_P_hat_yform

QSERIES_Y = SeriesRing(TruncatedQSeries, YLAURENT)


class NearPoleError(ArithmeticError):
    """A theta denominator is too close to a zero of theta_1."""

    def __init__(self, fixed_point: int, weight: tuple, argument: complex, distance: float):
        self.fixed_point = fixed_point
        self.weight = weight
        self.argument = argument
        self.distance = distance
        super().__init__(f"fixed point {fixed_point}, weight {weight}: denominator argument "
                         f"{argument:.6g} is {distance:.2e} from the lattice")


# -- fixed points -------------------------------------------------------------
@dataclass(frozen=True)
class FixedPointData:
    """Tangent weights ``(w1, w2)`` at each torus-fixed point of ``X_r`` in the ``(t1, t2)`` basis."""

    r: int
    weights: tuple

    def pairing(self, j: int, which: int, t1: complex, t2: complex) -> complex:
        a, b = self.weights[j][which]
        return a * t1 + b * t2


def fixed_point_data(r: int) -> FixedPointData:
    """Fixed point ``p_j`` (``j = 0..r-1``) has weights ``(-(j+1), r-j-1)`` and ``(j, j-r)``."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    weights = tuple((((-(j + 1)), r - j - 1), (j, j - r)) for j in range(r))
    return FixedPointData(r, weights)


def lattice_distance(a: complex, tau: complex) -> float:
    """Distance from ``a`` to the nearest point of ``Z tau + Z``."""
    b = a.imag / tau.imag
    x = a.real - b * tau.real
    m = round(b)
    n = round(x)
    best = math.inf
    for dm in (-1, 0, 1):
        for dn in (-1, 0, 1):
            best = min(best, abs(a - (m + dm) * tau - (n + dn)))
    return best


def equivariant_genus_numeric(r: int, tau: complex, z: complex, t1: complex, t2: complex,
                              q_order: int | None = None, pole_tolerance: float = 1e-8) -> complex:
    """Sum over fixed points of ``prod_k theta_1(z + <w_k, t>) / theta_1(<w_k, t>)``.

    Raises :class:`NearPoleError` when a denominator argument lies within
    ``pole_tolerance`` of a lattice point.
    """
    tau = complex(tau)
    data = fixed_point_data(r)
    total = 0j
    for j in range(r):
        term = 1 + 0j
        for which in (0, 1):
            a = data.pairing(j, which, complex(t1), complex(t2))
            d = lattice_distance(a, tau)
            if d < pole_tolerance:
                raise NearPoleError(j, data.weights[j][which], a, d)
            term *= numeric.theta1_numeric(tau, z + a, q_order) / numeric.theta1_numeric(tau, a, q_order)
        total += term
    return total


def conifold_numeric(tau: complex, z: complex, t1: complex, t2: complex, q_order: int | None = None) -> complex:
    """The explicit two-term ``X_2`` sum, written out term by term."""
    th = lambda x: numeric.theta1_numeric(tau, x, q_order)  # noqa: E731
    return (th(z - t1 + t2) / th(-t1 + t2) * th(z - 2 * t2) / th(-2 * t2)
            + th(z - 2 * t1) / th(-2 * t1) * th(z + t1 - t2) / th(t1 - t2))


# -- exact circle restriction -------------------------------------------------
def _circle_numerator(r: int, q_order: int) -> TruncatedQSeries:
    """``-r theta_1(z+rt) theta_1(z-rt) / (theta_1(rt)/(1-sigma^r))**2`` over ``QQ[y, sigma]``.

    Computed with ``s = sigma**r`` and relabelled, since only ``r t`` enters.
    """
    fug = ("sigma",)
    plus = theta1_qexp(ThetaArgument(1, (1,)), q_order, fug)
    minus = theta1_qexp(ThetaArgument(1, (-1,)), q_order, fug)
    reduced = theta1_qexp(ThetaArgument(0, (1,)), q_order, fug, omit_zero_factor=True)
    num = (plus * minus / reduced ** 2).resolve().scale(-r)
    if r != 1:
        num = num.map(lambda c: c.substitute_power(1, r), num.ring)
    return num.truncate_order(q_order)


def circle_denominator(r: int) -> LaurentPoly:
    """``(1 - sigma**r)**2``."""
    one = LaurentPoly.constant(CircleRational.VARIABLES, 1)
    s = LaurentPoly.monomial(CircleRational.VARIABLES, (0, r))
    return (one - s) * (one - s)


def genus_circle_exact(r: int, q_order: int) -> TruncatedQSeries:
    """``Z_{X_r}(tau, z; t, -t)`` as a q-series with coefficients rational in ``(y, sigma)``.

    ``sigma = e^{2 pi i t}``; known through ``q**q_order``.
    """
    if r < 1:
        raise ValueError("r must be a positive integer")
    num = _circle_numerator(r, q_order)
    den = circle_denominator(r)
    return num.map(lambda c: CircleRational(c, den), CIRCLE_RATIONAL)


def genus_circle_numeric(r: int, tau: complex, z: complex, t: complex, q_order: int | None = None) -> complex:
    return equivariant_genus_numeric(r, tau, z, t, -t, q_order)


# -- expansion in v = 2 pi i t -----------------------------------------------
@dataclass
class GenusExpansion:
    """Laurent expansion of the circle genus in ``v = 2 pi i t``.

    ``alpha_hat[g]`` is the coefficient of ``v**(2g-2)``: a q-series with
    Laurent-polynomial coefficients in ``y``.
    """

    r: int
    q_order: int
    v_order: int
    series: FormalLaurentSeries
    alpha_hat: dict = field(default_factory=dict)

    def alpha(self, g: int) -> TruncatedQSeries:
        if g not in self.alpha_hat:
            raise SeriesError(f"alpha_hat_{2 * g} needs v_order >= {2 * g - 2}, have {self.v_order}")
        return self.alpha_hat[g]

    def odd_coefficients(self) -> dict:
        return {e: c for e, c in self.series.terms().items() if e % 2}


def _exp_weights(b: int, n: int) -> list:
    """``b**k / k!`` for ``k < n``: the Taylor coefficients of ``exp(b v)``."""
    return [as_rational(Fraction(b ** k, factorial(k))) for k in range(n)]


def v_expand(r: int, q_order: int, v_order: int) -> GenusExpansion:
    """Expand the circle genus in ``v`` through ``v**v_order`` by substituting ``sigma = e^v``."""
    if v_order < 0 or v_order % 2:
        raise ValueError("v_order must be even and nonnegative")
    num = _circle_numerator(r, q_order)
    n_terms = v_order + 5  # the 1/(1-e^{rv})^2 factor costs four orders
    # numerator: for each q-coefficient, sum_b P_b(y) e^{b v}
    v_coeffs = [[YLaurent.zero() for _ in num.coeffs] for _ in range(n_terms)]
    for qi, c in enumerate(num.coeffs):
        by_sigma: dict = {}
        for (ey, es), a in c.items():
            if es % 2:
                raise SeriesError("half-integer sigma exponent in the circle genus")
            by_sigma.setdefault(es // 2, {})[ey] = a
        for b, poly in by_sigma.items():
            p = YLaurent(poly, half_units=True)
            for k, wgt in enumerate(_exp_weights(b, n_terms)):
                if wgt:
                    v_coeffs[k][qi] = v_coeffs[k][qi] + p * wgt
    num_v = FormalLaurentSeries(
        QSERIES_Y,
        [TruncatedQSeries(YLAURENT, col, num.base, num.step, num.precision) for col in v_coeffs],
        0, n_terms - 1)
    # 1 / (1 - e^{r v})^2 over the rationals
    one_minus = FormalLaurentSeries(QQ, [0] + [-w for w in _exp_weights(r, n_terms)[1:]], 0, n_terms - 1)
    inv_den = (one_minus * one_minus).invert()
    inv_den_q = inv_den.map(lambda c: TruncatedQSeries.constant(YLAURENT, c), QSERIES_Y)
    series = (num_v * inv_den_q).truncate_at(v_order)
    expansion = GenusExpansion(r, q_order, v_order, series)
    for g in range(0, v_order // 2 + 2):
        if 2 * g - 2 <= v_order:
            expansion.alpha_hat[g] = series.coefficient(2 * g - 2)
    for g, a in expansion.alpha_hat.items():
        for c in a.coeffs:
            if not c.has_integer_exponents():
                raise SeriesError(f"alpha_hat_{2 * g} has a half-integer y exponent")
    return expansion


# -- closed forms -------------------------------------------------------------
def _lift(series: TruncatedQSeries) -> TruncatedQSeries:
    return series.map(YLaurent.constant, YLAURENT)


def theta_over_eta_power_squared(q_order: int, eta_power: int = 3) -> TruncatedQSeries:
    """``(theta_1(tau, z) / eta**eta_power)**2`` exactly; ``eta_power=1`` gives the printed variant."""
    theta_sq = (theta1_qexp(ThetaArgument(), q_order) ** 2).resolve()
    eta = dedekind_eta_qexp(q_order)
    return theta_sq * _lift(eta ** (-2 * eta_power))


def alpha0_hat_closed(r: int, q_order: int, eta_power: int = 3) -> TruncatedQSeries:
    """``(1/r) (theta_1/eta^3)^2``, the leading Laurent coefficient."""
    return theta_over_eta_power_squared(q_order, eta_power).scale(Fraction(1, r))


def alpha_hat_closed(r: int, g: int, q_order: int) -> TruncatedQSeries:
    """``alpha_hat_{2g}`` from the closed form ``alpha_hat_0 * (1 - r^2 P_hat v^2 + sum (2n-1) G_hat_{2n} (r v)^{2n})``."""
    a0 = alpha0_hat_closed(r, q_order)
    if g == 0:
        return a0
    if g == 1:
        return _times_P_hat(a0, q_order).scale(-r * r)
    return a0 * _lift(g_hat(g, q_order).scale((2 * g - 1) * r ** (2 * g)))


def _times_P_hat(series: TruncatedQSeries, q_order: int) -> TruncatedQSeries:
    """Multiply a y-Laurent q-series by ``P_hat`` and clear the ``(1-y)^2`` denominators."""
    lifted = series.map(YRationalFunction, YRATIONAL)
    prod = lifted * weierstrass_P_hat_yform(q_order)
    return prod.map(YRationalFunction.to_laurent, YLAURENT)


def regularized_genus(r: int, q_order: int) -> TruncatedQSeries:
    """The ``v**0`` (equivalently ``t**0``) Laurent coefficient of the circle genus.

    Cross-checked against ``-r (theta_1/eta^3)^2 P_hat``; the ``(1-y)^2``
    zero of ``theta_1^2`` must cancel the pole of ``P_hat`` exactly.
    """
    if r < 1:
        raise ValueError("r must be a positive integer")
    expansion = v_expand(r, q_order, 0)
    reg = expansion.alpha(1).truncate_order(q_order)
    closed = _times_P_hat(theta_over_eta_power_squared(q_order), q_order).scale(-r).truncate_order(q_order)
    if reg != closed:
        raise CancellationError(f"regularized genus mismatch: {reg.mismatches(closed)[:3]}")
    return reg


# -- K3 -----------------------------------------------------------------------
def _theta_even_product(kind: int, q_order: int) -> TruncatedQSeries:
    """``theta_2``, ``theta_3`` or ``theta_4`` at ``z`` exactly, grid ``q^(1/2)`` where needed."""
    y = YLaurent.monomial(1)
    yi = YLaurent.monomial(-1)
    one = YLaurent.one()
    if kind == 2:
        n = q_order + 1
        coeffs = [one] + [YLaurent.zero()] * (n - 1)
        coeffs = [c * (one + yi) for c in coeffs]
        for m in range(1, n):
            _mul_binom(coeffs, one, m)
            _mul_binom(coeffs, y, m, sign=+1)
            _mul_binom(coeffs, yi, m, sign=+1)
        half = YLaurent.monomial(Fraction(1, 2))
        coeffs = [c * half for c in coeffs]
        return TruncatedQSeries(YLAURENT, coeffs, 3, 24, 3 + 24 * n)
    sign = 1 if kind == 3 else -1
    n = 2 * (q_order + 1)  # half-integer grid
    coeffs = [one] + [YLaurent.zero()] * (n - 1)
    for m in range(1, q_order + 1):
        _mul_binom(coeffs, one, 2 * m)
    for m in range(1, q_order + 2):
        _mul_binom(coeffs, y, 2 * m - 1, sign=sign)
        _mul_binom(coeffs, yi, 2 * m - 1, sign=sign)
    return TruncatedQSeries(YLAURENT, coeffs, 0, 12, 12 * n)


def _mul_binom(coeffs: list, a, k: int, sign: int = -1):
    """``coeffs *= (1 + sign * a * x**k)`` truncated."""
    for i in range(len(coeffs) - 1, k - 1, -1):
        src = coeffs[i - k]
        if src:
            coeffs[i] = coeffs[i] + a * src if sign > 0 else coeffs[i] - a * src


def _at_z_zero(series: TruncatedQSeries) -> TruncatedQSeries:
    return series.map(lambda c: YLaurent.constant(sum(c.terms.values(), 0)), YLAURENT)


def k3_elliptic_genus(q_order: int) -> TruncatedQSeries:
    """``8 sum_{i=2,3,4} (theta_i(tau, z) / theta_i(tau, 0))**2``: weight 0, index 1, value 24 at ``y = 1``."""
    total = None
    for kind in (2, 3, 4):
        th = _theta_even_product(kind, q_order)
        ratio = th * _at_z_zero(th).invert()
        sq = ratio * ratio
        total = sq if total is None else total + sq
    return total.scale(8).truncate_order(q_order)


def k3_numeric(tau: complex, z: complex, q_order: int | None = None) -> complex:
    return 8 * sum((numeric.theta_other_numeric(i, tau, z, q_order)
                    / numeric.theta_other_numeric(i, tau, 0, q_order)) ** 2 for i in (2, 3, 4))


# -- numeric closed forms -----------------------------------------------------
def theta_over_eta3_sq_numeric(tau: complex, z: complex, q_order: int | None = None, eta_power: int = 3) -> complex:
    return (numeric.theta1_numeric(tau, z, q_order) / numeric.eta_numeric(tau, q_order) ** eta_power) ** 2


def regularized_numeric(r: int, tau: complex, z: complex, q_order: int | None = None) -> complex:
    """``-r (theta_1/eta^3)^2 P_hat`` evaluated numerically."""
    return -r * theta_over_eta3_sq_numeric(tau, z, q_order) * numeric.P_hat_numeric(tau, z, q_order)


def y_evaluator(z: complex):
    """Coefficient evaluator for y-Laurent coefficients at ``y = e^{2 pi i z}``."""
    return lambda c: c.evaluate_z(z)


def evaluate_y_series(series: TruncatedQSeries, tau: complex, z: complex) -> complex:
    return series.evaluate(tau, y_evaluator(z))


def unhatted_factor(order: int) -> complex:
    """``(2 pi i)**order``: ``alpha_{2g} = (2 pi i)**(2g-2) alpha_hat_{2g}``."""
    return (2j * math.pi) ** order


def circle_value_exact(series: TruncatedQSeries, tau: complex, z: complex, t: complex) -> complex:
    return series.evaluate(tau, lambda c: c.evaluate_log(z, t))

