"""Sparse Laurent polynomials and rational functions with exact coefficients.

Exponents are stored in units of 1/2 so that the square roots ``y**(1/2)``
produced by theta functions stay representable.  Coefficients are Python
``int`` or ``fractions.Fraction``; both are always in lowest terms.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Union[int, Fraction]

__all__ = [
    "Rational",
    "LaurentPoly",
    "YLaurent",
    "YRationalFunction",
    "CircleRational",
    "CancellationError",
    "as_rational",
]


class CancellationError(ArithmeticError):
    """An expected exact cancellation did not happen."""


def as_rational(c) -> Rational:
    """Normalize ``c`` to an ``int`` when possible, otherwise a ``Fraction``."""
    if isinstance(c, bool):
        raise TypeError("bool is not a rational coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"not an exact rational: {c!r}")


def _half(e) -> int:
    """Convert a (half-)integer exponent to half units."""
    twice = Fraction(e) * 2
    if twice.denominator != 1:
        raise ValueError(f"exponent {e} is not a half-integer")
    return int(twice)


class LaurentPoly:
    """Multivariate Laurent polynomial over the rationals.

    ``terms`` maps a tuple of exponents (in half units, one entry per
    variable) to a nonzero rational coefficient.
    """

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        self.variables = tuple(variables)
        clean = {}
        if terms:
            n = len(self.variables)
            for k, c in terms.items():
                if c:
                    k = tuple(k)
                    if len(k) != n:
                        raise ValueError(f"exponent {k} has wrong arity for {self.variables}")
                    clean[k] = as_rational(c)
        self._terms = clean
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def _raw(cls, variables, terms):
        obj = cls.__new__(cls)
        obj.variables = variables
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, variables, c=1):
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables, exponents, c=1):
        """``c * prod(v**e)``; ``exponents`` are ordinary (half-)integers."""
        return cls(variables, {tuple(_half(e) for e in exponents): c})

    def _like(self, terms):
        return type(self)._raw(self.variables, terms)

    # -- access ---------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coefficient(self, exponents) -> Rational:
        return self._terms.get(tuple(_half(e) for e in exponents), 0)

    def has_integer_exponents(self) -> bool:
        return all(e % 2 == 0 for k in self._terms for e in k)

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if not isinstance(other, LaurentPoly) or other.variables != self.variables:
            raise TypeError(f"incompatible Laurent polynomials: {self.variables} vs "
                            f"{getattr(other, 'variables', type(other).__name__)}")

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.constant(self.variables, other)
        self._check(other)
        return other

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self.constant(self.variables, other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)) and not isinstance(other, bool):
            return self + (-self._coerce(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return self._like({})
            return self._like({k: as_rational(c * other) for k, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        add = self._add_keys
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = add(ka, kb)
                out[k] = out.get(k, 0) + ca * cb
        return self._like({k: as_rational(c) for k, c in out.items() if c})

    __rmul__ = __mul__

    @staticmethod
    def _add_keys(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert_monomial() ** (-n)
        result = self.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def invert_monomial(self):
        """Inverse of a monomial; other polynomials are not units."""
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit in the Laurent ring")
        (k, c), = self._terms.items()
        return self._like({tuple(-e for e in k): as_rational(Fraction(1) / c)})

    def shift(self, exponents):
        """Multiply by the monomial with the given exponents."""
        d = tuple(_half(e) for e in exponents)
        return self._like({self._add_keys(k, d): c for k, c in self._terms.items()})

    def substitute_power(self, index: int, factor) -> "LaurentPoly":
        """Replace variable ``index`` by its ``factor``-th power (factor may be -1)."""
        out = {}
        for k, c in self._terms.items():
            k2 = list(k)
            k2[index] = k2[index] * factor
            k2 = tuple(k2)
            s = out.get(k2, 0) + c
            if s:
                out[k2] = s
            else:
                out.pop(k2, None)
        return self._like(out)

    # -- comparison / evaluation ---------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self.constant(self.variables, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def evaluate(self, *values: complex) -> complex:
        """Numeric value with ``values`` given in the order of ``variables``.

        Half powers use the principal branch of each variable's logarithm,
        so pass values as ``exp(2j*pi*x)`` consistently.
        """
        if len(values) != len(self.variables):
            raise ValueError("wrong number of values")
        logs = [cmath.log(v) / 2 for v in values]
        total = 0j
        for k, c in self._terms.items():
            total += float(c) * cmath.exp(sum(e * l for e, l in zip(k, logs)))
        return total

    def evaluate_log(self, *half_logs: complex) -> complex:
        """Value with each variable given as ``log(v)/2``; avoids branch issues."""
        total = 0j
        for k, c in self._terms.items():
            total += float(c) * cmath.exp(sum(e * l for e, l in zip(k, half_logs)))
        return total

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms):
            c = self._terms[k]
            mono = "*".join(f"{v}^{Fraction(e, 2)}" for v, e in zip(self.variables, k) if e)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


class YLaurent(LaurentPoly):
    """Laurent polynomial in the single variable ``y`` with half-integer exponents.

    Keys are plain ``int`` half-unit exponents rather than 1-tuples.
    """

    __slots__ = ()
    VARIABLES = ("y",)

    def __init__(self, terms: Mapping | None = None, *, half_units: bool = False):
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e) if half_units else _half(e)] = as_rational(c)
        self.variables = self.VARIABLES
        self._terms = clean
        self._hash = None

    @classmethod
    def constant(cls, variables=None, c=1):
        if not isinstance(variables, (tuple, list)) and variables is not None:
            c = variables
        return cls._raw(cls.VARIABLES, {0: as_rational(c)} if c else {})

    @classmethod
    def monomial(cls, exponent, c=1):
        return cls._raw(cls.VARIABLES, {_half(exponent): as_rational(c)} if c else {})

    @classmethod
    def zero(cls):
        return cls._raw(cls.VARIABLES, {})

    @classmethod
    def one(cls):
        return cls._raw(cls.VARIABLES, {0: 1})

    @staticmethod
    def _add_keys(a, b):
        return a + b

    def coefficient(self, exponent) -> Rational:
        return self._terms.get(_half(exponent), 0)

    def exponents(self) -> list[Fraction]:
        return [Fraction(k, 2) for k in sorted(self._terms)]

    def as_dict(self) -> dict:
        """``{exponent: coefficient}`` with ordinary (possibly half-integer) exponents."""
        return {Fraction(k, 2): c for k, c in sorted(self._terms.items())}

    def has_integer_exponents(self) -> bool:
        return all(k % 2 == 0 for k in self._terms)

    def min_exponent(self) -> Fraction:
        return Fraction(min(self._terms), 2)

    def max_exponent(self) -> Fraction:
        return Fraction(max(self._terms), 2)

    def invert_monomial(self):
        if len(self._terms) != 1:
            raise ZeroDivisionError(f"{self} is not a unit in the Laurent ring")
        (k, c), = self._terms.items()
        return self._raw(self.VARIABLES, {-k: as_rational(Fraction(1) / c)})

    def shift(self, exponent):
        d = _half(exponent)
        return self._raw(self.VARIABLES, {k + d: c for k, c in self._terms.items()})

    def reflect(self) -> "YLaurent":
        """``y -> 1/y``."""
        return self._raw(self.VARIABLES, {-k: c for k, c in self._terms.items()})

    def evaluate(self, y: complex) -> complex:
        s = cmath.sqrt(y)
        total = 0j
        for k, c in self._terms.items():
            total += float(c) * s ** k
        return total

    def evaluate_z(self, z: complex) -> complex:
        """Value at ``y = exp(2 pi i z)`` with ``y**(1/2) = exp(pi i z)``."""
        s = cmath.exp(1j * cmath.pi * z)
        total = 0j
        for k, c in self._terms.items():
            total += float(c) * s ** k
        return total

    def __repr__(self):
        if not self._terms:
            return "YLaurent(0)"
        return "YLaurent({" + ", ".join(
            f"{Fraction(k, 2)}: {c}" for k, c in sorted(self._terms.items())) + "})"


# -- dense univariate helpers used for gcd reduction ---------------------
def _to_dense(p: YLaurent, shift: int) -> list:
    """Coefficients (low to high) of ``p * y**(shift/2)`` on the half-unit grid."""
    if p.is_zero():
        return []
    lo = min(p._terms) + shift
    hi = max(p._terms) + shift
    assert lo >= 0
    out = [0] * (hi + 1)
    for k, c in p._terms.items():
        out[k + shift] = c
    return out


def _from_dense(coeffs: list, shift: int) -> YLaurent:
    return YLaurent._raw(YLaurent.VARIABLES,
                         {i - shift: as_rational(c) for i, c in enumerate(coeffs) if c})


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _divmod_dense(a: list, b: list):
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1]
        if c:
            f = c / lead
            q[i] = f
            for j, bj in enumerate(b):
                a[i + j] -= f * bj
    rem = _trim(a[: len(b) - 1])
    return [as_rational(Fraction(c)) for c in q], [as_rational(Fraction(c)) for c in rem]


def _gcd_dense(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _divmod_dense(a, b)
        a, b = b, r
    if not a:
        return [1]
    lead = Fraction(a[-1])
    return [as_rational(Fraction(c) / lead) for c in a]


class YRationalFunction:
    """Quotient of two :class:`YLaurent` polynomials, kept gcd-reduced.

    The denominator is normalized to have lowest exponent 0 and a leading
    (highest-degree) coefficient of 1.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=None, *, reduce: bool = True):
        if not isinstance(numerator, YLaurent):
            numerator = YLaurent.constant(numerator)
        if denominator is None:
            denominator = YLaurent.one()
        elif not isinstance(denominator, YLaurent):
            denominator = YLaurent.constant(denominator)
        if denominator.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            numerator, denominator = self._reduce(numerator, denominator)
        self.numerator = numerator
        self.denominator = denominator

    @staticmethod
    def _reduce(num: YLaurent, den: YLaurent):
        if num.is_zero():
            return num, YLaurent.one()
        # strip the monomial content, then the polynomial gcd
        dmin = min(den._terms)
        nmin = min(num._terms)
        den_d = _to_dense(den, -dmin)
        num_d = _to_dense(num, -nmin)
        if len(den_d) > 1 and len(num_d) > 1:
            g = _gcd_dense(num_d, den_d)
            if len(g) > 1:
                num_d, r1 = _divmod_dense(num_d, g)
                den_d, r2 = _divmod_dense(den_d, g)
                assert not r1 and not r2
        lead = Fraction(den_d[-1])
        if lead != 1:
            num_d = [c / lead for c in num_d]
            den_d = [c / lead for c in den_d]
        return _from_dense(num_d, -(nmin - dmin)), _from_dense(den_d, 0)

    @classmethod
    def zero(cls):
        return cls(YLaurent.zero())

    @classmethod
    def one(cls):
        return cls(YLaurent.one())

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_laurent(self) -> bool:
        return self.denominator.is_monomial()

    def to_laurent(self) -> YLaurent:
        """Return the equal Laurent polynomial or raise :class:`CancellationError`."""
        if not self.is_laurent():
            raise CancellationError(
                f"denominator {self.denominator} does not cancel against {self.numerator}")
        return self.numerator * self.denominator.invert_monomial()

    @staticmethod
    def _wrap(x):
        if isinstance(x, YRationalFunction):
            return x
        if isinstance(x, YLaurent):
            return YRationalFunction(x, reduce=False)
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return YRationalFunction(YLaurent.constant(x), reduce=False)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.denominator == o.denominator:
            return YRationalFunction(self.numerator + o.numerator, self.denominator)
        return YRationalFunction(self.numerator * o.denominator + o.numerator * self.denominator,
                                 self.denominator * o.denominator)

    __radd__ = __add__

    def __neg__(self):
        return YRationalFunction(-self.numerator, self.denominator, reduce=False)

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return YRationalFunction(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def invert(self) -> "YRationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return YRationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self * o.invert()

    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.numerator * o.denominator == o.numerator * self.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def evaluate(self, y: complex) -> complex:
        return self.numerator.evaluate(y) / self.denominator.evaluate(y)

    def evaluate_z(self, z: complex) -> complex:
        return self.numerator.evaluate_z(z) / self.denominator.evaluate_z(z)

    def __repr__(self):
        return f"({self.numerator!r}) / ({self.denominator!r})"


class CircleRational:
    """Rational function in ``(y, sigma)``: a :class:`LaurentPoly` over a fixed denominator.

    No gcd reduction is attempted; equality is decided by cross-multiplication.
    """

    __slots__ = ("numerator", "denominator")
    VARIABLES = ("y", "sigma")

    def __init__(self, numerator: LaurentPoly, denominator: LaurentPoly | None = None):
        if denominator is None:
            denominator = LaurentPoly.constant(self.VARIABLES, 1)
        if numerator.variables != self.VARIABLES or denominator.variables != self.VARIABLES:
            raise TypeError("CircleRational expects polynomials in (y, sigma)")
        if denominator.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.numerator = numerator
        self.denominator = denominator

    def is_zero(self):
        return self.numerator.is_zero()

    def __bool__(self):
        return not self.numerator.is_zero()

    def __add__(self, other):
        if not isinstance(other, CircleRational):
            return NotImplemented
        if self.denominator == other.denominator:
            return CircleRational(self.numerator + other.numerator, self.denominator)
        return CircleRational(self.numerator * other.denominator + other.numerator * self.denominator,
                              self.denominator * other.denominator)

    def __neg__(self):
        return CircleRational(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, CircleRational):
            return CircleRational(self.numerator * other.numerator, self.denominator * other.denominator)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CircleRational(self.numerator * other, self.denominator)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CircleRational):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self):
        raise TypeError("CircleRational is unhashable (no canonical form)")

    def reflect_sigma(self) -> "CircleRational":
        """``sigma -> 1/sigma``."""
        return CircleRational(self.numerator.substitute_power(1, -1),
                              self.denominator.substitute_power(1, -1))

    def at_y_equals_one(self) -> "CircleRational":
        """Specialize ``y = 1``; the result still lives in the (y, sigma) ring."""
        def collapse(p):
            out = {}
            for (ey, es), c in p.items():
                if ey % 2:
                    raise ValueError("half-integer y exponent; y = 1 specialization ambiguous")
                out[(0, es)] = out.get((0, es), 0) + c
            return LaurentPoly(self.VARIABLES, out)
        return CircleRational(collapse(self.numerator), collapse(self.denominator))

    def evaluate_log(self, z: complex, t: complex) -> complex:
        """Value at ``y = e^{2 pi i z}``, ``sigma = e^{2 pi i t}``."""
        logs = (1j * cmath.pi * z, 1j * cmath.pi * t)
        return self.numerator.evaluate_log(*logs) / self.denominator.evaluate_log(*logs)

    def __repr__(self):
        return f"CircleRational(({self.numerator!r}) / ({self.denominator!r}))"


def laurent_sum(items: Iterable[LaurentPoly], variables) -> LaurentPoly:
    out: dict = {}
    for p in items:
        for k, c in p.items():
            out[k] = out.get(k, 0) + c
    return LaurentPoly(variables, out)
