"""Complex-double evaluation of theta_1, eta, Eisenstein series and ``P_hat``.

All functions use truncated product or Lambert forms in ``q = e^{2 pi i tau}``.
When ``q_order`` is omitted it is chosen so that ``|q|**q_order < 1e-17``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from fractions import Fraction

from .special import bernoulli

TWO_PI_I = 2j * math.pi
TAIL_WARN = 1e-12


class ConvergenceWarning(RuntimeWarning):
    """The truncated expansion may not reach double precision."""


def _nome(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError(f"Im tau must be positive, got {tau}")
    return cmath.exp(TWO_PI_I * tau)


def default_order(tau: complex, target: float = 1e-17, cap: int = 2000) -> int:
    a = abs(_nome(tau))
    return min(max(int(math.log(target) / math.log(a)) + 2, 4), cap)


def _check_tail(qabs: float, order: int, scale: float = 1.0):
    tail = scale * qabs ** (order + 1)
    if tail > TAIL_WARN:
        warnings.warn(f"truncation tail ~{tail:.1e} exceeds {TAIL_WARN:g}; raise q_order",
                      ConvergenceWarning, stacklevel=3)


def theta1_numeric(tau: complex, z: complex, q_order: int | None = None) -> complex:
    """``theta_1(tau, z) = i q^(1/8) y^(-1/2) prod (1-q^m)(1-y q^(m-1))(1-q^m/y)``."""
    q = _nome(tau)
    tau = complex(tau)
    z = complex(z)
    y = cmath.exp(TWO_PI_I * z)
    yi = 1 / y
    if q_order is None:
        q_order = default_order(tau, 1e-17 / max(1.0, abs(y), abs(yi)))
    prod = 1 - y
    qm = 1 + 0j
    for _ in range(1, q_order + 1):
        qm *= q
        prod *= (1 - qm) * (1 - y * qm) * (1 - yi * qm)
    _check_tail(abs(q), q_order, max(1.0, abs(y), abs(yi)))
    return 1j * cmath.exp(1j * math.pi * tau / 4 - 1j * math.pi * z) * prod


def theta1_prime0_numeric(tau: complex, q_order: int | None = None) -> complex:
    """``d theta_1/dz`` at ``z = 0``; equals ``2 pi eta^3``."""
    return 2 * math.pi * eta_numeric(tau, q_order) ** 3


def eta_numeric(tau: complex, q_order: int | None = None) -> complex:
    q = _nome(tau)
    if q_order is None:
        q_order = default_order(tau)
    prod = 1 + 0j
    qm = 1 + 0j
    for _ in range(q_order):
        qm *= q
        prod *= 1 - qm
    _check_tail(abs(q), q_order)
    return cmath.exp(1j * math.pi * complex(tau) / 12) * prod


def eisenstein_numeric(k: int, tau: complex, q_order: int | None = None) -> complex:
    """``E_{2k}(tau)`` via the Lambert series ``sum n^(2k-1) q^n / (1 - q^n)``."""
    q = _nome(tau)
    if q_order is None:
        q_order = default_order(tau)
    acc = 0j
    qn = 1 + 0j
    for n in range(1, q_order + 1):
        qn *= q
        acc += n ** (2 * k - 1) * qn / (1 - qn)
    _check_tail(abs(q), q_order, float(q_order) ** (2 * k - 1))
    return 1 - float(Fraction(4 * k) / bernoulli(2 * k)) * acc


def g_hat_numeric(k: int, tau: complex, q_order: int | None = None) -> complex:
    return -float(Fraction(bernoulli(2 * k)) / math.factorial(2 * k)) * eisenstein_numeric(k, tau, q_order)


def g_numeric(k: int, tau: complex, q_order: int | None = None) -> complex:
    """Unhatted ``G_{2k} = (2 pi i)^(2k) G_hat_{2k}``."""
    return TWO_PI_I ** (2 * k) * g_hat_numeric(k, tau, q_order)


def P_hat_numeric(tau: complex, z: complex, q_order: int | None = None) -> complex:
    """``wp(tau, z) / (2 pi i)^2`` from the lattice-symmetric Lambert form

    ``1/12 + sum_{n in Z} q^n y/(1 - q^n y)^2 - 2 sum_{n>=1} q^n/(1 - q^n)^2``.
    """
    q = _nome(tau)
    y = cmath.exp(TWO_PI_I * complex(z))
    yi = 1 / y
    if q_order is None:
        q_order = default_order(tau, 1e-17 / max(1.0, abs(y), abs(yi)))
    total = 1 / 12 + y / (1 - y) ** 2
    qn = 1 + 0j
    for _ in range(1, q_order + 1):
        qn *= q
        a = qn * y
        b = qn * yi
        total += a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qn / (1 - qn) ** 2
    _check_tail(abs(q), q_order, max(1.0, abs(y), abs(yi)))
    return total


def wp_numeric(tau: complex, z: complex, q_order: int | None = None) -> complex:
    """Unhatted Weierstrass function ``wp = (2 pi i)^2 P_hat``."""
    return TWO_PI_I ** 2 * P_hat_numeric(tau, z, q_order)


def theta_other_numeric(index: int, tau: complex, z: complex, q_order: int | None = None) -> complex:
    """``theta_2``, ``theta_3`` or ``theta_4`` from their product formulas."""
    q = _nome(tau)
    tau = complex(tau)
    if q_order is None:
        q_order = default_order(tau)
    y = cmath.exp(TWO_PI_I * complex(z))
    yi = 1 / y
    sq = cmath.exp(1j * math.pi * tau)  # q^(1/2)
    prod = 1 + 0j
    qm = 1 + 0j
    for m in range(1, q_order + 1):
        qm *= q
        if index == 2:
            prod *= (1 - qm) * (1 + y * qm) * (1 + yi * qm)
        else:
            half = qm / sq
            sign = 1 if index == 3 else -1
            prod *= (1 - qm) * (1 + sign * y * half) * (1 + sign * yi * half)
    if index == 2:
        return 2 * cmath.exp(1j * math.pi * tau / 4) * cmath.cos(math.pi * complex(z)) * prod
    if index in (3, 4):
        return prod
    raise ValueError("index must be 2, 3 or 4")
