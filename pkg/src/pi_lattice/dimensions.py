"""Dimensions as integer exponent vectors, and exact lattice solving over them.

The dimensions of a quantity space form a free abelian group; once an ordered
set of base dimensions is fixed, a dimension is just its vector of integer
exponents and the group law is vector addition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BaseSetMismatch, NoIntegerSolution, NoRationalSolution, RankDeficient

__all__ = [
    "BaseDimensionSet",
    "Dimension",
    "ExponentMatrix",
    "dim_mul",
    "dim_pow",
    "dim_inv",
    "is_dimensionless",
    "rational_solve",
    "solve_representation",
    "minimal_power",
]


@dataclass(frozen=True)
class BaseDimensionSet:
    symbols: tuple[str, ...]

    def __init__(self, symbols: Iterable[str]):
        symbols = tuple(symbols)
        for s in symbols:
            if not isinstance(s, str) or not s.strip():
                raise ValueError(f"base dimension symbols must be non-empty strings, got {s!r}")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"base dimension symbols must be distinct: {symbols}")
        object.__setattr__(self, "symbols", symbols)

    @property
    def arity(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __call__(self, exponents: Iterable[int] | None = None, **by_symbol: int) -> "Dimension":
        """Build a dimension from a vector, or from keyword exponents (``L=1, T=-2``)."""
        if exponents is not None and by_symbol:
            raise TypeError("give either an exponent vector or keyword exponents, not both")
        if exponents is None:
            unknown = set(by_symbol) - set(self.symbols)
            if unknown:
                raise KeyError(f"unknown base symbols: {sorted(unknown)}")
            exponents = [by_symbol.get(s, 0) for s in self.symbols]
        return Dimension(self, exponents)

    def identity(self) -> "Dimension":
        return Dimension(self, [0] * self.arity)


@dataclass(frozen=True)
class Dimension:
    base: BaseDimensionSet
    exponents: tuple[int, ...] = field(default=())

    def __init__(self, base: BaseDimensionSet, exponents: Iterable[int]):
        exps = tuple(exponents)
        if len(exps) != base.arity:
            raise ValueError(f"expected {base.arity} exponents over {base.symbols}, got {len(exps)}")
        for e in exps:
            if isinstance(e, bool) or not isinstance(e, int):
                if isinstance(e, Fraction) and e.denominator == 1:
                    continue
                raise TypeError(f"dimension exponents must be integers, got {e!r}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponents", tuple(int(e) for e in exps))

    def __mul__(self, other: "Dimension") -> "Dimension":
        return dim_mul(self, other)

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return dim_mul(self, dim_inv(other))

    def __pow__(self, k: int) -> "Dimension":
        return dim_pow(self, k)

    def inverse(self) -> "Dimension":
        return dim_inv(self)

    @property
    def dimensionless(self) -> bool:
        return is_dimensionless(self)

    def __iter__(self):
        return iter(self.exponents)

    def __len__(self) -> int:
        return len(self.exponents)

    def __getitem__(self, i):
        return self.exponents[i]

    def __str__(self) -> str:
        parts = []
        for sym, e in zip(self.base.symbols, self.exponents):
            if e == 0:
                continue
            parts.append(sym if e == 1 else f"{sym}^{e}")
        return " ".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"Dimension({list(self.exponents)} over {'/'.join(self.base.symbols)})"


def _check_same_base(a: Dimension, b: Dimension) -> None:
    if a.base != b.base:
        raise BaseSetMismatch(f"dimensions over different base sets: {a.base.symbols} vs {b.base.symbols}")


def dim_mul(a: Dimension, b: Dimension) -> Dimension:
    _check_same_base(a, b)
    return Dimension(a.base, (x + y for x, y in zip(a.exponents, b.exponents)))


def dim_pow(a: Dimension, k: int) -> Dimension:
    return Dimension(a.base, (k * x for x in a.exponents))


def dim_inv(a: Dimension) -> Dimension:
    return dim_pow(a, -1)


def is_dimensionless(a: Dimension) -> bool:
    return all(e == 0 for e in a.exponents)


@dataclass(frozen=True)
class ExponentMatrix:
    """Integer representation rows plus the powers of the powered extension.

    ``rows[i]`` expresses target ``i`` over the basis. ``powers`` holds one
    positive entry per powered slot; it is all ones in the unpowered case.
    """

    rows: tuple[tuple[int, ...], ...]
    powers: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(int(v) for v in row) for row in self.rows))
        object.__setattr__(self, "powers", tuple(int(p) for p in self.powers))
        if any(p < 1 for p in self.powers):
            raise ValueError(f"powers must be >= 1, got {self.powers}")

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0


def _vectors(basis: Sequence[Dimension], targets: Sequence[Dimension]) -> tuple[int, list, list]:
    everything = list(basis) + list(targets)
    if not everything:
        return 0, [], []
    base = everything[0].base
    for dim in everything[1:]:
        if dim.base != base:
            raise BaseSetMismatch(f"dimensions over different base sets: {base.symbols} vs {dim.base.symbols}")
    return base.arity, [d.exponents for d in basis], [d.exponents for d in targets]


def rational_solve(
    basis: Sequence[Sequence[int]], targets: Sequence[Sequence[int]], d: int | None = None
) -> list[tuple[Fraction, ...] | None]:
    """Solve ``sum_j z_j * basis[j] == b`` over the rationals for every target ``b``.

    Gauss-Jordan elimination on the d x r matrix whose columns are the basis
    vectors, carrying all targets along as extra columns. Raises
    ``RankDeficient`` before looking at any target if the basis is dependent.
    A target with no rational solution yields ``None`` in its slot.
    """
    r = len(basis)
    if d is None:
        d = len(basis[0]) if basis else (len(targets[0]) if targets else 0)
    t = len(targets)
    # rows of the augmented matrix [A | B], A[i][j] = basis[j][i]
    rows = [
        [Fraction(basis[j][i]) for j in range(r)] + [Fraction(targets[k][i]) for k in range(t)]
        for i in range(d)
    ]
    pivot_row = 0
    for col in range(r):
        pivot = next((i for i in range(pivot_row, d) if rows[i][col] != 0), None)
        if pivot is None:
            raise RankDeficient(f"basis vectors are linearly dependent (rank < {r})")
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        lead = rows[pivot_row][col]
        rows[pivot_row] = [v / lead for v in rows[pivot_row]]
        for i in range(d):
            if i != pivot_row and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[pivot_row])]
        pivot_row += 1
    solutions: list[tuple[Fraction, ...] | None] = []
    for k in range(t):
        if any(rows[i][r + k] != 0 for i in range(r, d)):
            solutions.append(None)
        else:
            solutions.append(tuple(rows[j][r + k] for j in range(r)))
    return solutions


def solve_representation(targets: Sequence[Dimension], basis: Sequence[Dimension]) -> ExponentMatrix:
    """Integer exponents expressing each target dimension over the basis dimensions.

    Uniqueness of every row follows from the rank check on the basis.
    """
    d, bvecs, tvecs = _vectors(basis, targets)
    solutions = rational_solve(bvecs, tvecs, d)
    rows = []
    for k, sol in enumerate(solutions):
        if sol is None:
            raise NoRationalSolution(f"target {k} is outside the rational span of the basis", index=k)
        if any(v.denominator != 1 for v in sol):
            raise NoIntegerSolution(
                f"target {k} has only the non-integral representation {[str(v) for v in sol]}",
                index=k,
                solution=sol,
            )
        rows.append(tuple(int(v) for v in sol))
    return ExponentMatrix(tuple(rows), (1,) * len(rows))


def minimal_power(target: Dimension, basis: Sequence[Dimension]) -> tuple[int, tuple[int, ...]]:
    """Smallest ``P >= 1`` with ``target**P`` integrally representable, and that representation."""
    d, bvecs, tvecs = _vectors(basis, [target])
    (sol,) = rational_solve(bvecs, tvecs, d)
    if sol is None:
        raise NoRationalSolution("target is outside the rational span of the basis", index=0)
    p = math.lcm(*(v.denominator for v in sol)) if sol else 1
    return p, tuple(int(v * p) for v in sol)
