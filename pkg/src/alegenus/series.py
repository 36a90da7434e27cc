"""Truncated series over an arbitrary coefficient ring.

Two public flavours share one engine:

* :class:`TruncatedQSeries` -- a series in the nome ``q`` whose exponents
  live on the grid ``Z/24`` (so ``q**(1/8)`` and ``q**(1/24)`` coexist).
* :class:`FormalLaurentSeries` -- a Laurent series in an expansion variable
  with integer exponents.

Internally a series is ``sum_i c_i x**(base + step*i)`` where exponents are
counted in *units* (1/24 for q-series, 1 for Laurent series).  ``precision``
is the first exponent (in units) whose coefficient is unknown; ``None``
marks an exact, finite series.  Products are known below
``min(prec1 + base2, prec2 + base1)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable

from .laurent import as_rational
from .rings import QQ, Ring


class SeriesError(ValueError):
    """Invalid series operation (ring mismatch, bad precondition, range)."""


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class _Series:
    """Engine shared by both series flavours; not part of the public API."""

    __slots__ = ("ring", "base", "step", "coeffs", "precision")
    UNIT = 1  # exponent denominator

    def __init__(self, ring: Ring, coeffs, base: int = 0, step: int = 1, precision=None):
        if step <= 0:
            raise SeriesError("step must be positive")
        coeffs = list(coeffs)
        if precision is not None:
            n = max(_ceil_div(precision - base, step), 0)
            del coeffs[n:]
        # drop trailing zeros of exact series so equal values look equal
        if precision is None:
            while coeffs and ring.is_zero(coeffs[-1]):
                coeffs.pop()
        self.ring = ring
        self.base = base
        self.step = step
        self.coeffs = tuple(coeffs)
        self.precision = precision

    # -- construction ---------------------------------------------------
    def _new(self, coeffs, base, step, precision):
        return type(self)(self.ring, coeffs, base, step, precision)

    @classmethod
    def _default_step(cls):
        return 1

    # -- basic access ---------------------------------------------------
    def unit_terms(self) -> dict:
        """Nonzero coefficients keyed by exponent in units."""
        z = self.ring.is_zero
        return {self.base + self.step * i: c for i, c in enumerate(self.coeffs) if not z(c)}

    def coefficient_units(self, e: int):
        if self.precision is not None and e >= self.precision:
            raise SeriesError(f"exponent {Fraction(e, self.UNIT)} is beyond the truncation "
                              f"{Fraction(self.precision, self.UNIT)}")
        d = e - self.base
        if d < 0 or d % self.step:
            return self.ring.zero()
        i = d // self.step
        return self.coeffs[i] if i < len(self.coeffs) else self.ring.zero()

    def is_exact(self) -> bool:
        return self.precision is None

    def is_zero(self) -> bool:
        z = self.ring.is_zero
        return all(z(c) for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def valuation_units(self):
        """Exponent (units) of the first nonzero coefficient, or ``None``."""
        z = self.ring.is_zero
        for i, c in enumerate(self.coeffs):
            if not z(c):
                return self.base + self.step * i
        return None

    # -- grid manipulation ----------------------------------------------
    def _regrid(self, base: int, step: int):
        """Same series on a finer grid starting at ``base`` (<= self.base)."""
        if base == self.base and step == self.step:
            return self.coeffs
        assert self.step % step == 0 and (self.base - base) % step == 0 and base <= self.base
        zero = self.ring.zero()
        ratio = self.step // step
        offset = (self.base - base) // step
        n = offset + (len(self.coeffs) - 1) * ratio + 1 if self.coeffs else 0
        out = [zero] * n
        for i, c in enumerate(self.coeffs):
            out[offset + i * ratio] = c
        return out

    def _check_compatible(self, other):
        if type(other) is not type(self):
            raise SeriesError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.ring != self.ring:
            raise SeriesError(f"mixed coefficient rings: {self.ring} vs {other.ring}")

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, _Series):
            return self + self._constant_like(other)
        self._check_compatible(other)
        base = min(self.base, other.base)
        step = gcd(gcd(self.step, other.step), abs(self.base - other.base))
        a = self._regrid(base, step)
        b = other._regrid(base, step)
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._new(out, base, step, _min_prec(self.precision, other.precision))

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return self._new([-c for c in self.coeffs], self.base, self.step, self.precision)

    def __sub__(self, other):
        if not isinstance(other, _Series):
            other = self._constant_like(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _constant_like(self, c):
        """Exact constant series in this ring (``c`` rational or a ring element)."""
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            c = self.ring.from_rational(c)
        elif not self.ring.contains(c):
            raise SeriesError(f"{c!r} is not an element of {self.ring}")
        return self._new([c], 0, self._default_step(), None)

    def scale(self, c):
        """Multiply every coefficient by ``c`` (a rational or a ring element)."""
        return self._new([x * c for x in self.coeffs], self.base, self.step, self.precision)

    def __mul__(self, other):
        if not isinstance(other, _Series):
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                return self.scale(other)
            if self.ring.contains(other):
                return self.scale(other)
            return NotImplemented
        self._check_compatible(other)
        step = gcd(self.step, other.step)
        base = self.base + other.base
        prec = _min_prec(
            None if self.precision is None else self.precision + other.base,
            None if other.precision is None else other.precision + self.base,
        )
        a = self._regrid(self.base, step)
        b = other._regrid(other.base, step)
        n = len(a) + len(b) - 1 if a and b else 0
        if prec is not None:
            n = min(n, max(_ceil_div(prec - base, step), 0))
        if n <= 0:
            return self._new([], base, step, prec)
        ring = self.ring
        zero = ring.zero()
        out = [zero] * n
        nz_b = [(j, c) for j, c in enumerate(b) if not ring.is_zero(c)]
        for i, ca in enumerate(a):
            if i >= n or ring.is_zero(ca):
                continue
            lim = n - i
            for j, cb in nz_b:
                if j >= lim:
                    break
                out[i + j] = out[i + j] + ca * cb
        return self._new(out, base, step, prec)

    def __rmul__(self, other):
        return self * other

    def invert(self, precision=None):
        """Multiplicative inverse.

        The leading nonzero coefficient must be a unit of the ring.  An exact
        input that is not a monomial needs an explicit ``precision`` (units).
        """
        v = self.valuation_units()
        if v is None:
            raise ZeroDivisionError("cannot invert the zero series")
        lead = self.coefficient_units(v)
        try:
            lead_inv = self.ring.invert(lead)
        except (ZeroDivisionError, ArithmeticError) as exc:
            raise SeriesError(f"leading coefficient {lead!r} is not invertible in {self.ring}") from exc
        start = (v - self.base) // self.step
        a = self.coeffs[start:]
        if self.precision is None:
            if len(a) == 1 and precision is None:
                return self._new([lead_inv], -v, self.step, None)
            if precision is None:
                raise SeriesError("inverting an exact non-monomial series needs a precision")
            rel = precision + v
        else:
            rel = self.precision - v
            if precision is not None:
                rel = min(rel, precision + v)
        n = max(_ceil_div(rel, self.step), 0)
        out = [lead_inv]
        ring = self.ring
        for k in range(1, n):
            acc = ring.zero()
            for j in range(1, min(k, len(a) - 1) + 1):
                if not ring.is_zero(a[j]):
                    acc = acc + a[j] * out[k - j]
            out.append(-(lead_inv * acc) if not ring.is_zero(acc) else ring.zero())
        return self._new(out, -v, self.step, -v + rel)

    def __truediv__(self, other):
        if isinstance(other, _Series):
            return self * other.invert()
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(as_rational(Fraction(1) / Fraction(other)))
        if self.ring.contains(other):
            return self.scale(self.ring.invert(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        result = self._new([self.ring.one()], 0, self._default_step(), None)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, precision: int):
        """Forget everything at or beyond ``precision`` (units)."""
        return self._new(self.coeffs, self.base, self.step, _min_prec(self.precision, precision))

    def map(self, f: Callable, ring: Ring):
        """Apply ``f`` coefficient-wise, producing a series over ``ring``."""
        return type(self)(ring, [f(c) for c in self.coeffs], self.base, self.step, self.precision)

    # -- exp / log --------------------------------------------------------
    def _index_form(self, what: str):
        """Coefficients on a grid starting at exponent 0 (for exp/log)."""
        step = gcd(self.step, abs(self.base)) if self.base else self.step
        if self.base < 0:
            v = self.valuation_units()
            if v is not None and v < 0:
                raise SeriesError(f"{what} needs a series without negative exponents")
            return self._trimmed_nonneg()._index_form(what)
        coeffs = self._regrid(0, step) if self.coeffs else []
        return step, list(coeffs)

    def _trimmed_nonneg(self):
        v = self.valuation_units()
        start = (v - self.base) // self.step
        return self._new(self.coeffs[start:], v, self.step, self.precision)

    def exp(self):
        """``exp`` of a series with vanishing constant term."""
        step, f = self._index_form("exp")
        if f and not self.ring.is_zero(f[0]):
            raise SeriesError("exp requires a vanishing constant term")
        prec = self.precision
        if prec is None:
            raise SeriesError("exp of an exact series needs a truncation; call truncate() first")
        n = max(_ceil_div(prec, step), 0)
        ring = self.ring
        g = [ring.one()] + [ring.zero()] * (n - 1) if n else []
        kf = [(k, f[k] * k) for k in range(1, min(len(f), n)) if not ring.is_zero(f[k])]
        for m in range(1, n):
            acc = ring.zero()
            for k, fk in kf:
                if k > m:
                    break
                if not ring.is_zero(g[m - k]):
                    acc = acc + fk * g[m - k]
            g[m] = acc * Fraction(1, m) if not ring.is_zero(acc) else acc
        return self._new(g, 0, step, prec)

    def log(self):
        """``log`` of a series with constant term 1."""
        step, f = self._index_form("log")
        if not f or f[0] != self.ring.one():
            raise SeriesError("log requires constant term 1")
        prec = self.precision
        if prec is None:
            raise SeriesError("log of an exact series needs a truncation; call truncate() first")
        n = max(_ceil_div(prec, step), 0)
        ring = self.ring
        f = f + [ring.zero()] * max(n - len(f), 0)
        out = [ring.zero()] * n
        for m in range(1, n):
            acc = f[m] * m
            for k in range(1, m):
                if not ring.is_zero(out[k]) and not ring.is_zero(f[m - k]):
                    acc = acc - out[k] * k * f[m - k]
            out[m] = acc * Fraction(1, m) if not ring.is_zero(acc) else acc
        return self._new(out, 0, step, prec)

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        """Equality up to the common truncation (exact series compare fully)."""
        if not isinstance(other, _Series):
            try:
                other = self._constant_like(other)
            except SeriesError:
                return NotImplemented
        if type(other) is not type(self) or other.ring != self.ring:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def mismatches(self, other) -> list:
        """``[(exponent, mine, theirs)]`` for every differing coefficient."""
        diff = self - other
        out = []
        for e in sorted(diff.unit_terms()):
            out.append((Fraction(e, self.UNIT), self.coefficient_units(e), other.coefficient_units(e)))
        return out


class TruncatedQSeries(_Series):
    """Truncated series in ``q`` with exponents on the ``1/24`` grid.

    ``truncation_order`` is the first exponent (in 1/24 units) that is not
    known; ``None`` means exact.
    """

    __slots__ = ()
    UNIT = 24

    @classmethod
    def _default_step(cls):
        return 24

    def __init__(self, ring: Ring, coeffs=(), base_exponent: int = 0, step: int = 24,
                 truncation_order=None):
        if 24 % step:
            raise SeriesError("q-series grid step must divide 24")
        super().__init__(ring, coeffs, base_exponent, step, truncation_order)

    @property
    def base_exponent(self) -> int:
        return self.base

    @property
    def truncation_order(self):
        return self.precision

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_coefficients(cls, ring: Ring, coeffs, q_order: int | None = None, offset=0):
        """``q**offset * sum(coeffs[n] q**n)``, known through ``q**(offset + q_order)``."""
        base = int(Fraction(offset) * 24)
        prec = None if q_order is None else base + 24 * (q_order + 1)
        return cls(ring, coeffs, base, 24, prec)

    @classmethod
    def from_terms(cls, ring: Ring, terms: dict, truncation=None):
        """``{q-exponent (Fraction): coefficient}``; ``truncation`` is a q-exponent."""
        units = {}
        for e, c in terms.items():
            u = Fraction(e) * 24
            if u.denominator != 1:
                raise SeriesError(f"exponent {e} is not on the 1/24 grid")
            units[int(u)] = c
        prec = None
        if truncation is not None:
            p = Fraction(truncation) * 24
            if p.denominator != 1:
                raise SeriesError(f"truncation {truncation} is not on the 1/24 grid")
            prec = int(p)
        return cls._from_units(ring, units, prec)

    @classmethod
    def constant(cls, ring: Ring, c, q_order: int | None = None):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            c = ring.from_rational(c)
        return cls.from_coefficients(ring, [c], q_order)

    @classmethod
    def monomial(cls, ring: Ring, exponent, c=1, truncation=None):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            c = ring.from_rational(c)
        return cls.from_terms(ring, {Fraction(exponent): c}, truncation)

    @classmethod
    def _from_units(cls, ring, terms, precision=None):
        terms = {e: c for e, c in terms.items() if not ring.is_zero(c)}
        if not terms:
            return cls(ring, [], 0, 24, precision)
        exps = sorted(terms)
        base = exps[0]
        step = 24
        for e in exps:
            step = gcd(step, e - base)
        coeffs = [ring.zero()] * ((exps[-1] - base) // step + 1)
        for e, c in terms.items():
            coeffs[(e - base) // step] = c
        return cls(ring, coeffs, base, step, precision)

    def _new(self, coeffs, base, step, precision):
        return TruncatedQSeries(self.ring, coeffs, base, step, precision)

    def map(self, f, ring):
        return TruncatedQSeries(ring, [f(c) for c in self.coeffs], self.base, self.step, self.precision)

    # -- access ---------------------------------------------------------
    def terms(self) -> dict:
        """Nonzero coefficients keyed by q-exponent (``Fraction``)."""
        return {Fraction(e, 24): c for e, c in sorted(self.unit_terms().items())}

    def coefficient(self, exponent):
        u = Fraction(exponent) * 24
        if u.denominator != 1:
            return self.ring.zero()
        return self.coefficient_units(int(u))

    def truncation(self):
        """Truncation as a q-exponent, or ``None`` when exact."""
        return None if self.precision is None else Fraction(self.precision, 24)

    def truncate_q(self, exponent) -> "TruncatedQSeries":
        """Keep terms with q-exponent strictly below ``exponent``."""
        u = Fraction(exponent) * 24
        assert u.denominator == 1
        return self.truncate(int(u))

    def truncate_order(self, q_order: int) -> "TruncatedQSeries":
        """Keep terms through ``q**q_order`` (absolute exponent)."""
        return self.truncate(24 * (q_order + 1))

    def valuation(self):
        v = self.valuation_units()
        return None if v is None else Fraction(v, 24)

    def evaluate(self, tau: complex, coeff_eval: Callable | None = None) -> complex:
        """Numeric value at ``q = e^{2 pi i tau}`` with ``q^(a/24) = e^{2 pi i tau a/24}``."""
        import cmath
        if coeff_eval is None:
            coeff_eval = complex
        q_unit = cmath.exp(2j * cmath.pi * tau / 24)
        qs = q_unit ** self.step
        total = 0j
        cur = q_unit ** self.base
        for c in self.coeffs:
            if not self.ring.is_zero(c):
                total += coeff_eval(c) * cur
            cur *= qs
        return total

    def __repr__(self):
        body = " + ".join(f"({c!r})*q^{e}" for e, c in self.terms().items()) or "0"
        tail = "" if self.precision is None else f" + O(q^{Fraction(self.precision, 24)})"
        return f"TruncatedQSeries[{self.ring}]({body}{tail})"


class FormalLaurentSeries(_Series):
    """Truncated Laurent series with integer exponents.

    ``v_truncation`` is the highest exponent whose coefficient is known
    (inclusive); ``None`` marks an exact, finite series.
    """

    __slots__ = ()
    UNIT = 1

    def __init__(self, ring: Ring, coeffs=(), lowest_order: int = 0, v_truncation=None, *, step: int = 1):
        prec = None if v_truncation is None else v_truncation + 1
        super().__init__(ring, coeffs, lowest_order, step, prec)

    def _new(self, coeffs, base, step, precision):
        return FormalLaurentSeries(self.ring, coeffs, base,
                                   None if precision is None else precision - 1, step=step)

    def map(self, f, ring):
        return FormalLaurentSeries(ring, [f(c) for c in self.coeffs], self.base,
                                   self.v_truncation, step=self.step)

    @classmethod
    def from_terms(cls, ring: Ring, terms: dict, v_truncation=None):
        terms = {int(e): c for e, c in terms.items() if not ring.is_zero(c)}
        if not terms:
            return cls(ring, [], 0, v_truncation)
        lo = min(terms)
        hi = max(terms)
        coeffs = [terms.get(e, ring.zero()) for e in range(lo, hi + 1)]
        return cls(ring, coeffs, lo, v_truncation)

    @classmethod
    def variable(cls, ring: Ring, v_truncation=None):
        return cls(ring, [ring.one()], 1, v_truncation)

    @classmethod
    def constant(cls, ring: Ring, c, v_truncation=None):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            c = ring.from_rational(c)
        return cls(ring, [c], 0, v_truncation)

    @property
    def lowest_order(self) -> int:
        return self.base

    @property
    def v_truncation(self):
        return None if self.precision is None else self.precision - 1

    def coefficient(self, order: int):
        return self.coefficient_units(order)

    def terms(self) -> dict:
        return dict(sorted(self.unit_terms().items()))

    def coefficient_list(self, lo: int, hi: int) -> list:
        return [self.coefficient_units(k) for k in range(lo, hi + 1)]

    def truncate_at(self, v_truncation: int) -> "FormalLaurentSeries":
        return self.truncate(v_truncation + 1)

    def derivative(self) -> "FormalLaurentSeries":
        """Term-by-term derivative with respect to the expansion variable."""
        terms = {e - 1: c * e for e, c in self.unit_terms().items() if e}
        vt = None if self.v_truncation is None else self.v_truncation - 1
        return FormalLaurentSeries.from_terms(self.ring, terms, vt)

    def shift(self, k: int) -> "FormalLaurentSeries":
        """Multiply by ``v**k``."""
        return FormalLaurentSeries(self.ring, self.coeffs, self.base + k,
                                   None if self.precision is None else self.precision - 1 + k,
                                   step=self.step)

    def singular_part(self) -> "FormalLaurentSeries":
        return FormalLaurentSeries.from_terms(self.ring, {e: c for e, c in self.unit_terms().items() if e < 0})

    def regular_part(self) -> "FormalLaurentSeries":
        terms = {e: c for e, c in self.unit_terms().items() if e >= 0}
        return FormalLaurentSeries.from_terms(self.ring, terms, self.v_truncation)

    def odd_part(self) -> "FormalLaurentSeries":
        return FormalLaurentSeries.from_terms(
            self.ring, {e: c for e, c in self.unit_terms().items() if e % 2}, self.v_truncation)

    def evaluate(self, v: complex, coeff_eval: Callable | None = None) -> complex:
        if coeff_eval is None:
            coeff_eval = complex
        return sum((coeff_eval(c) * v ** e for e, c in self.unit_terms().items()), 0j)

    def __repr__(self):
        body = " + ".join(f"({c!r})*v^{e}" for e, c in self.terms().items()) or "0"
        tail = "" if self.precision is None else f" + O(v^{self.precision})"
        return f"FormalLaurentSeries[{self.ring}]({body}{tail})"


class SeriesRing(Ring):
    """Ring whose elements are truncated series; lets series nest as coefficients."""

    def __init__(self, kind: type, base_ring: Ring):
        self.kind = kind
        self.base_ring = base_ring
        self.name = f"{kind.__name__}[{base_ring}]"

    def _key(self):
        return (self.kind, self.base_ring)

    def zero(self):
        return self.kind(self.base_ring, [])

    def one(self):
        return self.kind.constant(self.base_ring, self.base_ring.one())

    def is_zero(self, x):
        return x.is_zero()

    def invert(self, x):
        return x.invert()

    def from_rational(self, c):
        return self.kind.constant(self.base_ring, self.base_ring.from_rational(c))

    def contains(self, x):
        return isinstance(x, self.kind) and x.ring == self.base_ring


def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


def series_neg(a):
    return -a


def series_invert(a):
    return a.invert()


def series_exp(a):
    return a.exp()


def series_log(a):
    return a.log()


def laurent_extract(f: FormalLaurentSeries, order: int):
    """Exact coefficient of ``v**order``; ``order`` must lie in ``[lowest_order, v_truncation]``."""
    if order < f.lowest_order or (f.v_truncation is not None and order > f.v_truncation):
        raise SeriesError(f"order {order} outside [{f.lowest_order}, {f.v_truncation}]")
    return f.coefficient(order)


def rational_qseries(coeffs, q_order=None, offset=0) -> TruncatedQSeries:
    return TruncatedQSeries.from_coefficients(QQ, [as_rational(c) for c in coeffs], q_order, offset)
