"""Coefficient rings for truncated series.

A ring object only supplies what the series code cannot get from the
element types themselves: zero and one, a zero test, and inversion of a
leading coefficient.  Elements must support ``+``, ``-``, ``*`` among
themselves and ``*`` by Python rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import CircleRational, LaurentPoly, YLaurent, YRationalFunction, as_rational


class Ring:
    name = "ring"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return not x

    def invert(self, x):
        raise NotImplementedError

    def from_rational(self, c):
        return self.one() * c

    def contains(self, x) -> bool:
        return True

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return self.name

    def __repr__(self):
        return self.name


class RationalField(Ring):
    name = "QQ"

    def zero(self):
        return 0

    def one(self):
        return 1

    def invert(self, x):
        if not x:
            raise ZeroDivisionError("zero is not invertible")
        return as_rational(Fraction(1) / x)

    def from_rational(self, c):
        return as_rational(c)

    def contains(self, x):
        return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class ComplexField(Ring):
    name = "CC"

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def invert(self, x):
        if x == 0:
            raise ZeroDivisionError("zero is not invertible")
        return 1 / x

    def from_rational(self, c):
        return complex(c)

    def contains(self, x):
        return isinstance(x, complex)


class YLaurentRing(Ring):
    name = "QQ[y^1/2, y^-1/2]"

    def zero(self):
        return YLaurent.zero()

    def one(self):
        return YLaurent.one()

    def invert(self, x):
        return x.invert_monomial()

    def from_rational(self, c):
        return YLaurent.constant(c)

    def contains(self, x):
        return isinstance(x, YLaurent)


class YRationalRing(Ring):
    name = "QQ(y^1/2)"

    def zero(self):
        return YRationalFunction.zero()

    def one(self):
        return YRationalFunction.one()

    def invert(self, x):
        return x.invert()

    def from_rational(self, c):
        return YRationalFunction(YLaurent.constant(c))

    def contains(self, x):
        return isinstance(x, YRationalFunction)


class MultiLaurentRing(Ring):
    """Laurent polynomials in several named variables (half-integer exponents)."""

    def __init__(self, variables):
        self.variables = tuple(variables)
        self.name = "QQ[" + ", ".join(f"{v}^±1/2" for v in self.variables) + "]"

    def _key(self):
        return self.variables

    def zero(self):
        return LaurentPoly(self.variables)

    def one(self):
        return LaurentPoly.constant(self.variables, 1)

    def invert(self, x):
        return x.invert_monomial()

    def from_rational(self, c):
        return LaurentPoly.constant(self.variables, c)

    def contains(self, x):
        return isinstance(x, LaurentPoly) and x.variables == self.variables


class CircleRationalRing(Ring):
    name = "QQ(y, sigma)"

    def zero(self):
        return CircleRational(LaurentPoly(CircleRational.VARIABLES))

    def one(self):
        return CircleRational(LaurentPoly.constant(CircleRational.VARIABLES, 1))

    def is_zero(self, x):
        return x.is_zero()

    def invert(self, x):
        if x.is_zero():
            raise ZeroDivisionError("zero is not invertible")
        return CircleRational(x.denominator, x.numerator)

    def contains(self, x):
        return isinstance(x, CircleRational)


QQ = RationalField()
CC = ComplexField()
YLAURENT = YLaurentRing()
YRATIONAL = YRationalRing()
CIRCLE_LAURENT = MultiLaurentRing(CircleRational.VARIABLES)
CIRCLE_RATIONAL = CircleRationalRing()
