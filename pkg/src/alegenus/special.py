"""Exact q-expansions: Bernoulli and Eulerian numbers, Eisenstein series,
theta_1, eta and the normalized Weierstrass function.

Everything here is "hatted": factors of ``2 pi i`` are scaled out so all
coefficients are rational.  With ``w = 2 pi i z``

    P_hat(tau, z) = wp(tau, z) / (2 pi i)**2 = 1/w**2 + sum_{n>=2} (2n-1) G_hat_{2n} w**(2n-2),
    G_hat_{2k}    = -B_{2k} / (2k)! * E_{2k}.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .laurent import LaurentPoly, YLaurent, YRationalFunction, as_rational
from .rings import QQ, YLAURENT, YRATIONAL, MultiLaurentRing, Ring
from .series import FormalLaurentSeries, SeriesError, SeriesRing, TruncatedQSeries

QSERIES_QQ = SeriesRing(TruncatedQSeries, QQ)


# -- numbers ----------------------------------------------------------------
@lru_cache(maxsize=None)
def bernoulli(n: int):
    """Bernoulli number ``B_n`` for the generating function ``v/(e^v - 1)`` (``B_1 = -1/2``)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return 0
    # sum_{j=0}^{n} C(n+1, j) B_j = 0
    acc = sum(comb(n + 1, j) * bernoulli(j) for j in range(n))
    return as_rational(Fraction(-acc, n + 1))


def divisor_sigma(k: int, n: int) -> int:
    """``sum_{d | n} d**k``."""
    if n < 1:
        raise ValueError("n must be positive")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** k
            e = n // d
            if e != d:
                total += e ** k
        d += 1
    return total


def eulerian(n: int) -> list[int]:
    """Row ``A(n, 0..n-1)`` of Eulerian numbers.

    ``sum_{m>=1} m**n x**m = sum_j A(n, j) x**(j+1) / (1-x)**(n+1)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    row = [1]
    for m in range(2, n + 1):
        nxt = []
        for j in range(m):
            a = row[j] if j < len(row) else 0
            b = row[j - 1] if j >= 1 else 0
            nxt.append((j + 1) * a + (m - j) * b)
        row = nxt
    return row


# -- Eisenstein series --------------------------------------------------------
class EisensteinCache:
    """Append-only cache of ``E_{2k}`` q-series, safe to share between threads.

    Stored series are only ever replaced by longer ones, so concurrent
    population is idempotent.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._series: dict[int, TruncatedQSeries] = {}

    def get(self, weight: int, q_order: int) -> TruncatedQSeries:
        if weight < 2 or weight % 2:
            raise ValueError("weight must be a positive even integer")
        cached = self._series.get(weight)
        if cached is None or cached.truncation_order < 24 * (q_order + 1):
            fresh = _eisenstein_divisor_sum(weight // 2, q_order)
            with self._lock:
                cur = self._series.get(weight)
                if cur is None or cur.truncation_order < fresh.truncation_order:
                    self._series[weight] = fresh
            cached = fresh
        return cached.truncate_order(q_order)

    def weights(self) -> list[int]:
        return sorted(self._series)


EISENSTEIN_CACHE = EisensteinCache()


def _eisenstein_divisor_sum(k: int, q_order: int) -> TruncatedQSeries:
    factor = Fraction(-4 * k) / bernoulli(2 * k)
    coeffs = [1] + [as_rational(factor * divisor_sigma(2 * k - 1, n)) for n in range(1, q_order + 1)]
    return TruncatedQSeries.from_coefficients(QQ, coeffs, q_order)


def eisenstein(k: int, q_order: int) -> TruncatedQSeries:
    """Normalized Eisenstein series ``E_{2k}`` through ``q**q_order``.

    ``E_{2k} = 1 - (4k / B_{2k}) sum_n sigma_{2k-1}(n) q**n``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    return EISENSTEIN_CACHE.get(2 * k, q_order)


def eisenstein_lambert(k: int, q_order: int) -> TruncatedQSeries:
    """``E_{2k}`` recomputed from the double sum ``sum_{m,n} m**(2k-1) q**(mn)``."""
    acc = [0] * (q_order + 1)
    for m in range(1, q_order + 1):
        p = m ** (2 * k - 1)
        for n in range(1, q_order // m + 1):
            acc[m * n] += p
    factor = Fraction(-4 * k) / bernoulli(2 * k)
    coeffs = [1] + [as_rational(factor * a) for a in acc[1:]]
    return TruncatedQSeries.from_coefficients(QQ, coeffs, q_order)


def g_hat(k: int, q_order: int) -> TruncatedQSeries:
    """``G_hat_{2k} = -B_{2k}/(2k)! E_{2k}`` (so ``G_{2k} = (2 pi i)**(2k) G_hat_{2k}``)."""
    return eisenstein(k, q_order).scale(as_rational(-Fraction(bernoulli(2 * k)) / factorial(2 * k)))


# -- theta_1 and eta ----------------------------------------------------------
@dataclass(frozen=True)
class ThetaArgument:
    """Argument ``y_exponent*z + sum(shift[i]*t_i) + m*tau + n`` of a theta function."""

    y_exponent: int = 1
    shift_monomial: tuple = ()
    lattice_shift: tuple = (0, 0)

    def __post_init__(self):
        if self.y_exponent not in (0, 1):
            raise ValueError("the z-multiplicity must be 0 or 1")

    def negate(self) -> "ThetaArgument":
        if self.y_exponent:
            raise ValueError("cannot negate an argument containing z")
        m, n = self.lattice_shift
        return ThetaArgument(0, tuple(-e for e in self.shift_monomial), (-m, -n))


@dataclass(frozen=True)
class IPhaseSeries:
    """A q-series times ``i**i_power``; ``theta_1 = i * (theta_1 / i)`` keeps the exact part rational."""

    i_power: int
    series: TruncatedQSeries

    def __mul__(self, other):
        if isinstance(other, IPhaseSeries):
            return IPhaseSeries((self.i_power + other.i_power) % 4, self.series * other.series)
        return IPhaseSeries(self.i_power, self.series * other)

    def invert(self):
        return IPhaseSeries((-self.i_power) % 4, self.series.invert())

    def __truediv__(self, other):
        return self * other.invert()

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        return IPhaseSeries((self.i_power * n) % 4, self.series ** n)

    def __neg__(self):
        return IPhaseSeries(self.i_power, -self.series)

    def resolve(self) -> TruncatedQSeries:
        """The series with the unit folded in; the power of ``i`` must be even."""
        if self.i_power % 2:
            raise SeriesError("odd power of i survives; result is not rational")
        return -self.series if self.i_power == 2 else self.series


def _binomial_product(coeffs: list, a, k: int, one):
    """In place: ``coeffs *= (1 - a q**k)`` on an integer grid, truncated to ``len(coeffs)``."""
    n = len(coeffs)
    if k == 0:
        factor = one - a
        for i in range(n):
            if coeffs[i]:
                coeffs[i] = coeffs[i] * factor
        return
    for i in range(n - 1, k - 1, -1):
        src = coeffs[i - k]
        if src:
            coeffs[i] = coeffs[i] - a * src


def _theta_ring(fugacities) -> Ring:
    return YLAURENT if not fugacities else MultiLaurentRing(("y",) + tuple(fugacities))


def _monomial(ring: Ring, fugacities, y_exp, shift):
    if ring is YLAURENT:
        return YLaurent.monomial(y_exp)
    return LaurentPoly.monomial(ring.variables, (y_exp,) + tuple(shift))


def theta1_qexp(arg: ThetaArgument, q_order: int, fugacities: tuple = (),
                omit_zero_factor: bool = False) -> IPhaseSeries:
    """Exact expansion of ``theta_1(tau, arg)`` through relative order ``q**q_order``.

    ``theta_1 = i q^(1/8) X^(-1/2) prod_m (1-q^m)(1 - X q^(m-1))(1 - X^(-1) q^m)`` with
    ``X = exp(2 pi i arg)`` a monomial in ``y`` and the fugacities.  The result
    carries ``i`` as an explicit phase.  With ``omit_zero_factor`` the factor
    ``1 - X`` (the one vanishing at ``arg = 0``) is left out, which makes the
    leading coefficient a unit so the series can be inverted.
    """
    if len(arg.shift_monomial) != len(fugacities):
        raise ValueError(f"argument has {len(arg.shift_monomial)} fugacity exponents, "
                         f"expected {len(fugacities)} for {fugacities}")
    if q_order < 0:
        raise ValueError("q_order must be nonnegative")
    ring = _theta_ring(fugacities)
    x = _monomial(ring, fugacities, arg.y_exponent, arg.shift_monomial)
    if x == ring.one() and not omit_zero_factor:
        raise ValueError("theta_1 vanishes identically at a lattice point")
    x_inv = x.invert_monomial()
    n = q_order + 1
    one = ring.one()
    coeffs = [one] + [ring.zero()] * (n - 1)
    if not omit_zero_factor:
        _binomial_product(coeffs, x, 0, one)
    for m in range(1, n):
        _binomial_product(coeffs, one, m, one)
        _binomial_product(coeffs, x, m, one)
        _binomial_product(coeffs, x_inv, m, one)
    # X^(-1/2) prefactor
    half = _monomial(ring, fugacities, Fraction(-arg.y_exponent, 2),
                     [Fraction(-e, 2) for e in arg.shift_monomial])
    coeffs = [c * half for c in coeffs]
    base = 3
    m_shift, n_shift = arg.lattice_shift
    if m_shift or n_shift:
        # theta_1(x + m tau + n) = (-1)^(m+n) X^(-m) q^(-m^2/2) theta_1(x)
        factor = x_inv ** m_shift if m_shift >= 0 else x ** (-m_shift)
        if (m_shift + n_shift) % 2:
            factor = -factor
        coeffs = [c * factor for c in coeffs]
        base -= 12 * m_shift * m_shift
    series = TruncatedQSeries(ring, coeffs, base, 24, base + 24 * n)
    return IPhaseSeries(1, series)


def dedekind_eta_qexp(q_order: int) -> TruncatedQSeries:
    """``q^(1/24) prod_m (1 - q^m)`` through relative order ``q**q_order``."""
    n = q_order + 1
    coeffs = [1] + [0] * (n - 1)
    for m in range(1, n):
        _binomial_product(coeffs, 1, m, 1)
    return TruncatedQSeries(QQ, coeffs, 1, 24, 1 + 24 * n)


# -- Weierstrass function -----------------------------------------------------
def weierstrass_P_hat_wseries(q_order: int, w_order: int) -> FormalLaurentSeries:
    """``P_hat`` as a Laurent series in ``w = 2 pi i z`` with q-series coefficients.

    The singular part is the exact ``1/w**2`` term (``lowest_order == -2``).
    Coefficients are known through ``w**w_order``.
    """
    if w_order % 2:
        raise ValueError("w_order must be even")
    terms = {-2: TruncatedQSeries.constant(QQ, 1, q_order)}
    for n in range(1, w_order // 2 + 1):
        terms[2 * n] = g_hat(n + 1, q_order).scale(2 * n + 1)
    return FormalLaurentSeries.from_terms(QSERIES_QQ, terms, w_order)


def weierstrass_P_hat_derivative(q_order: int, w_order: int, order: int) -> FormalLaurentSeries:
    """``d^order/dw^order P_hat`` taken term by term, known through ``w**w_order``."""
    p = weierstrass_P_hat_wseries(q_order, w_order + order + (order % 2))
    for _ in range(order):
        p = p.derivative()
    return p.truncate_at(w_order)


def weierstrass_P_hat_yform(q_order: int) -> TruncatedQSeries:
    """``P_hat`` with coefficients rational in ``y``.

    ``q^0``: ``1/12 + y/(1-y)^2``; ``q^n``: ``sum_{d|n} d (y^d - 2 + y^-d)``.
    """
    y = YLaurent.monomial(1)
    one = YLaurent.one()
    lead = YRationalFunction(YLaurent.constant(Fraction(1, 12))) + YRationalFunction(y, (one - y) * (one - y))
    coeffs = [lead]
    for n in range(1, q_order + 1):
        terms = {}
        for d in range(1, n + 1):
            if n % d == 0:
                terms[d] = terms.get(d, 0) + d
                terms[-d] = terms.get(-d, 0) + d
                terms[0] = terms.get(0, 0) - 2 * d
        coeffs.append(YRationalFunction(YLaurent(terms)))
    return TruncatedQSeries.from_coefficients(YRATIONAL, coeffs, q_order)


# -- log(1 - e^v) -------------------------------------------------------------
@dataclass(frozen=True)
class LogExpansion:
    """``log_v * log(v) + pi_i * (pi i) + series(v)``.

    ``pi_i`` is an integer multiple of ``pi i`` and is only meaningful modulo
    2 (logarithms are defined up to ``2 pi i``).  ``log(-v)`` is identified
    with ``log(v)``; combinations are trusted only where the ``pi i`` part
    cancels.
    """

    log_v: int
    pi_i: int
    series: FormalLaurentSeries

    def __add__(self, other: "LogExpansion") -> "LogExpansion":
        return LogExpansion(self.log_v + other.log_v, self.pi_i + other.pi_i, self.series + other.series)

    def reflect(self) -> "LogExpansion":
        """``v -> -v``."""
        terms = {e: (-c if e % 2 else c) for e, c in self.series.terms().items()}
        return LogExpansion(self.log_v, self.pi_i,
                            FormalLaurentSeries.from_terms(self.series.ring, terms, self.series.v_truncation))

    def pi_i_cancels(self) -> bool:
        return self.pi_i % 2 == 0


def log_one_minus_exp(v_order: int) -> LogExpansion:
    """``log(1 - e^v) = log v + pi i + v/2 + sum_k B_{2k}/((2k)! 2k) v^(2k)`` through ``v**v_order``."""
    terms = {1: Fraction(1, 2)}
    for k in range(1, v_order // 2 + 1):
        terms[2 * k] = as_rational(Fraction(bernoulli(2 * k)) / (factorial(2 * k) * 2 * k))
    return LogExpansion(1, 1, FormalLaurentSeries.from_terms(QQ, terms, v_order))
