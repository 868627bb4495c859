"""Quantities: a measure in a field paired with a dimension.

Quantities are stored by their measure relative to the implicit basis of base
units, so the expansion of a quantity over that basis is its own
representation. Measure zero is the zero quantity of the dimension. There is
deliberately no addition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .dimensions import BaseDimensionSet, Dimension, dim_inv, dim_mul, dim_pow
from .errors import DimensionMismatch, ZeroDenominator, ZeroNotInvertible, ZeroUnit
from .fields import RATIONAL, Field

__all__ = [
    "Quantity",
    "UnitTuple",
    "q_mul",
    "q_scale",
    "q_inv",
    "q_pow",
    "q_prod",
    "measure_wrt",
    "nu_measure",
]


@dataclass(frozen=True)
class Quantity:
    measure: Any
    dim: Dimension

    def __post_init__(self):
        # plain ints would turn into floats on inversion
        if type(self.measure) is int:
            object.__setattr__(self, "measure", Fraction(self.measure))

    @classmethod
    def one(cls, base: BaseDimensionSet, field: Field = RATIONAL) -> "Quantity":
        """The identity ``1_Q``."""
        return cls(field.one(), base.identity())

    @classmethod
    def zero(cls, dim: Dimension, field: Field = RATIONAL) -> "Quantity":
        return cls(field.zero(), dim)

    @property
    def is_zero(self) -> bool:
        return self.measure == 0

    @property
    def invertible(self) -> bool:
        return not self.is_zero

    def __mul__(self, other):
        if isinstance(other, Quantity):
            return q_mul(self, other)
        return NotImplemented

    def __rmul__(self, alpha):
        # scalar action alpha * x
        if isinstance(alpha, Quantity):
            return NotImplemented
        return q_scale(alpha, self)

    def __truediv__(self, other: "Quantity") -> "Quantity":
        return q_mul(self, q_inv(other))

    def __pow__(self, k: int) -> "Quantity":
        return q_pow(self, k)

    def inverse(self) -> "Quantity":
        return q_inv(self)

    def __str__(self) -> str:
        d = str(self.dim)
        return f"{self.measure}" if d == "1" else f"{self.measure} [{d}]"


def q_mul(a: Quantity, b: Quantity) -> Quantity:
    # a zero factor gives measure 0 by ordinary field multiplication
    return Quantity(a.measure * b.measure, dim_mul(a.dim, b.dim))


def q_scale(alpha, x: Quantity) -> Quantity:
    return Quantity(alpha * x.measure, x.dim)


def q_inv(x: Quantity) -> Quantity:
    if x.is_zero:
        raise ZeroNotInvertible(f"the zero quantity of dimension {x.dim} has no inverse")
    return Quantity(1 / x.measure, dim_inv(x.dim))


def q_pow(x: Quantity, k: int) -> Quantity:
    if k == 0:
        # x^0 = 1_Q even for the zero quantity
        return Quantity(x.measure**0, x.dim.base.identity())
    if k < 0:
        x = q_inv(x)
        k = -k
    measure = x.measure
    result = measure
    for _ in range(k - 1):
        result = result * measure
    return Quantity(result, dim_pow(x.dim, k))


def q_prod(factors: Sequence[Quantity], base: BaseDimensionSet, field: Field = RATIONAL) -> Quantity:
    result = Quantity.one(base, field)
    for f in factors:
        result = q_mul(result, f)
    return result


@dataclass(frozen=True)
class UnitTuple:
    """A tuple ``E`` of non-zero quantities used as units for expansions."""

    entries: tuple[Quantity, ...]

    def __init__(self, entries: Sequence[Quantity]):
        entries = tuple(entries)
        for j, e in enumerate(entries):
            if e.is_zero:
                raise ZeroUnit(f"unit tuple entry {j} is the zero quantity of {e.dim}")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j) -> Quantity:
        return self.entries[j]

    def unit_for(self, z: Sequence[int]) -> Quantity:
        """The unit quantity ``prod_j e_j^{z_j}``."""
        if len(z) != len(self.entries):
            raise ValueError(f"exponent row of length {len(z)} for a unit tuple of length {len(self.entries)}")
        result = None
        for e, k in zip(self.entries, z):
            term = q_pow(e, k)
            result = term if result is None else q_mul(result, term)
        return result


def measure_wrt(q: Quantity, E: UnitTuple | Sequence[Quantity], z: Sequence[int]):
    """Measure of ``q`` in the expansion ``q = mu * prod_j e_j^{z_j}``."""
    if not isinstance(E, UnitTuple):
        E = UnitTuple(E)
    if len(z) != len(E):
        raise ValueError(f"exponent row of length {len(z)} for a unit tuple of length {len(E)}")
    if not E.entries:
        if any(q.dim.exponents):
            raise DimensionMismatch(f"{q.dim} is not dimensionless but the unit tuple is empty")
        return q.measure
    unit = E.unit_for(z)
    if unit.dim != q.dim:
        raise DimensionMismatch(f"quantity has dimension {q.dim}, expansion gives {unit.dim}")
    return q.measure / unit.measure


def nu_measure(y: Quantity, p: Quantity):
    """Measure of the dimensionless ratio ``y p^-1``; independent of any unit tuple."""
    if y.dim != p.dim:
        raise DimensionMismatch(f"cannot form a ratio of {y.dim} and {p.dim}")
    if p.is_zero:
        raise ZeroDenominator(f"the reference quantity of dimension {p.dim} is zero")
    return y.measure / p.measure
