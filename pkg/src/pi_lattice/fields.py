"""Scalar fields the measures of quantities live in.

Scalars are ordinary Python numbers supporting ``+ - * /`` and integer powers:
``Fraction`` for the rationals, ``float`` for binary floating point, and
:class:`GaussianRational` for the complex numbers with rational parts. A
:class:`Field` object supplies what the operators cannot: literal coercion,
zero tests, equality (tolerant for floats), sampling and formatting.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = GaussianRational(1)
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


@dataclass(frozen=True)
class Field:
    """Base field interface; see the concrete instances below."""

    name: str = "abstract"
    exact: bool = True

    def coerce(self, value: Any):
        raise NotImplementedError

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def is_zero(self, a) -> bool:
        return a == 0

    def eq(self, a, b) -> bool:
        return a == b

    def sample(self, rng: random.Random, nonzero: bool = False, bound: int = 10):
        """Small rational value ``p/q`` with ``|p| <= bound`` and ``1 <= q <= bound``."""
        return self.coerce(_small_rational(rng, nonzero, bound))

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        return self.coerce(Fraction(text.strip()))


def _small_rational(rng: random.Random, nonzero: bool, bound: int) -> Fraction:
    lo = 1 if nonzero else 0
    num = rng.randint(lo, bound) * (1 if rng.random() < 0.5 else -1)
    den = rng.randint(1, bound)
    return Fraction(num, den)


@dataclass(frozen=True)
class RationalField(Field):
    name: str = "rational"
    exact: bool = True

    def coerce(self, value):
        if isinstance(value, float):
            raise TypeError("refusing to coerce a binary float into the exact rational field")
        return Fraction(value)


@dataclass(frozen=True)
class FloatField(Field):
    name: str = "float"
    exact: bool = False
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12

    def coerce(self, value):
        return float(value)

    def eq(self, a, b) -> bool:
        return math.isclose(a, b, rel_tol=self.rel_tol, abs_tol=self.abs_tol)

    def format(self, a) -> str:
        return repr(float(a))

    def parse(self, text: str):
        return float(Fraction(text.strip()))


@dataclass(frozen=True)
class ComplexRationalField(Field):
    name: str = "complex"
    exact: bool = True

    def coerce(self, value):
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, float):
            raise TypeError("refusing to coerce a binary float into an exact field")
        return GaussianRational(value)

    def sample(self, rng, nonzero=False, bound=10):
        while True:
            z = GaussianRational(_small_rational(rng, False, bound), _small_rational(rng, False, bound))
            if z or not nonzero:
                return z

    def parse(self, text: str):
        text = text.strip().replace(" ", "")
        if not text.endswith("i"):
            return GaussianRational(Fraction(text))
        body = text[:-1]
        # split at the last sign that is not the leading one
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        if cut <= 0:
            im = body if body not in ("", "+", "-") else body + "1"
            return GaussianRational(0, Fraction(im))
        re, im = body[:cut], body[cut:]
        if im in ("+", "-"):
            im += "1"
        return GaussianRational(Fraction(re), Fraction(im))


RATIONAL = RationalField()
FLOAT = FloatField()
COMPLEX = ComplexRationalField()

FIELDS = {"rational": RATIONAL, "float": FLOAT, "complex": COMPLEX}


def get_field(name: str | Field) -> Field:
    if isinstance(name, Field):
        return name
    try:
        return FIELDS[name]
    except KeyError:
        raise ValueError(f"unknown field {name!r}; choose from {sorted(FIELDS)}") from None
