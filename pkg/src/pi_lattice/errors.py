"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class PiLatticeError(Exception):
    """Base class for every error raised by this package."""


# dimension lattice


class BaseSetMismatch(PiLatticeError):
    pass


class RankDeficient(PiLatticeError):
    """The repeating dimensions are linearly dependent over the rationals."""


class NoRationalSolution(PiLatticeError):
    """A target dimension lies outside the rational span of the basis."""

    def __init__(self, message: str, index: int | None = None, name: str | None = None):
        super().__init__(message)
        self.index = index
        self.name = name


class NoIntegerSolution(PiLatticeError):
    """A rational representation exists but it is not integral."""

    def __init__(self, message: str, index: int | None = None, solution=None):
        super().__init__(message)
        self.index = index
        self.solution = solution


class Unrepresentable(NoRationalSolution):
    pass


# quantities


class DimensionMismatch(PiLatticeError):
    pass


class ZeroNotInvertible(PiLatticeError, ZeroDivisionError):
    pass


class ZeroUnit(PiLatticeError):
    pass


class ZeroDenominator(PiLatticeError, ZeroDivisionError):
    pass


class ZeroRepeatingVariable(PiLatticeError):
    pass


# expressions


class ExprError(PiLatticeError):
    pass


class ParseError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariable(ExprError):
    def __init__(self, name: str, position: int | None = None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown variable {name!r}{where}")
        self.name = name
        self.position = position


class NonIntegerExponent(ExprError):
    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class EvaluationError(ExprError):
    def __init__(self, message: str, subexpression: str | None = None):
        super().__init__(message if subexpression is None else f"{message} in {subexpression}")
        self.subexpression = subexpression


class FieldClosure(ExprError):
    pass


# sampling / io


class SamplingExhausted(PiLatticeError):
    """Too many sample points made the scalar model fail to evaluate."""


class FormatError(PiLatticeError):
    def __init__(self, message: str, locus: str | int | None = None):
        if isinstance(locus, int):
            text = f"line {locus}: {message}"
        elif locus:
            text = f"{locus}: {message}"
        else:
            text = message
        super().__init__(text)
        self.locus = locus
