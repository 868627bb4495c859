"""A small expression language for scalar models.

Grammar (whitespace insensitive, except that ``p/q`` with no spaces is a
single rational literal)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' integer)?
    atom   := rational | name | call | '(' expr ')'

Decimal literals are read exactly (``0.25`` is ``1/4``). Calls to ``exp``,
``ln``, ``sin`` and ``sqrt`` are only available over the float field.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import EvaluationError, FieldClosure, NonIntegerExponent, ParseError, UnknownVariable
from .fields import RATIONAL, Field

__all__ = [
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "Expr",
    "parse",
    "evaluate",
    "render",
    "variables",
    "validate",
    "as_monomial",
    "FUNCTIONS",
]

FUNCTIONS = {
    "exp": math.exp,
    "ln": math.log,
    "sin": math.sin,
    "sqrt": math.sqrt,
}


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]


# -- lexing ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, name, op, end
    text: str
    pos: int
    end: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    n = len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        m = _TOKEN.match(text, i)
        if m is None or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind), m.end()))
        i = m.end()
    toks.append(_Tok("end", "", n, n))
    return toks


# -- parsing -----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, vocabulary):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.vocabulary = None if vocabulary is None else set(vocabulary)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind != "op":
            raise ParseError(f"expected {text!r}, found {self._describe(self.tok)}", self.tok.pos)
        return self.take()

    @staticmethod
    def _describe(t: _Tok) -> str:
        return "end of input" if t.kind == "end" else repr(t.text)

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise ParseError("empty expression", 0)
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.take().text
            left = BinOp(op, left, self.factor())
        return left

    def factor(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.take()
            return Neg(self.factor())
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        start = self.tok.pos
        parens = self.tok.kind == "op" and self.tok.text == "("
        save = self.i
        if parens:
            self.take()
        sign = 1
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1 if self.take().text == "-" else 1
        t = self.tok
        ok = t.kind == "num" and t.text.isdigit()
        if ok and parens:
            ok = self.peek().kind == "op" and self.peek().text == ")"
        if not ok:
            self.i = save
            raise NonIntegerExponent(f"exponent at position {start} must be an integer literal", start)
        self.take()
        if parens:
            self.expect(")")
        return sign * int(t.text)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.take()
            value = Fraction(t.text)
            slash, den = self.tok, self.peek()
            if (
                t.text.isdigit()
                and slash.kind == "op"
                and slash.text == "/"
                and slash.pos == t.end
                and den.kind == "num"
                and den.pos == slash.end
                and den.text.isdigit()
            ):
                self.take()
                self.take()
                if int(den.text) == 0:
                    raise ParseError("zero denominator in rational literal", den.pos)
                value = Fraction(int(t.text), int(den.text))
            return Num(value)
        if t.kind == "name":
            nxt = self.peek()
            if t.text in FUNCTIONS and nxt.kind == "op" and nxt.text == "(":
                self.take()
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            self.take()
            if self.vocabulary is not None and t.text not in self.vocabulary:
                raise UnknownVariable(t.text, t.pos)
            return Var(t.text)
        if t.kind == "op" and t.text == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {self._describe(t)}", t.pos)


def parse(text: str, vocabulary: Iterable[str] | None = None) -> Expr:
    """Parse ``text``; every variable must be in ``vocabulary`` when one is given."""
    return _Parser(text, vocabulary).parse()


# -- rendering ---------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    if isinstance(e, Num) and e.value < 0:
        return 0
    return 5


def _num_text(v: Fraction) -> str:
    if v < 0:
        return f"(-{_num_text(-v)})"
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def render(e: Expr) -> str:
    """Text that parses back to the same tree."""
    if isinstance(e, Num):
        return _num_text(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({render(e.arg)})"
    if isinstance(e, Neg):
        inner = render(e.operand)
        return "-" + (inner if _prec(e.operand) >= 3 else f"({inner})")
    if isinstance(e, Pow):
        base = render(e.base)
        simple = isinstance(e.base, (Var, Call)) or (isinstance(e.base, Num) and e.base.value.denominator == 1 and e.base.value >= 0)
        if not simple:
            base = f"({base})"
        return f"{base}^{e.exponent}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left = render(e.left)
        if _prec(e.left) < p:
            left = f"({left})"
        right = render(e.right)
        if _prec(e.right) <= p:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression node: {e!r}")


# -- analysis ----------------------------------------------------------------


def variables(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, (Neg,)):
        return variables(e.operand)
    if isinstance(e, Pow):
        return variables(e.base)
    if isinstance(e, Call):
        return variables(e.arg)
    return variables(e.left) | variables(e.right)


def _calls(e: Expr):
    if isinstance(e, Call):
        yield e
        yield from _calls(e.arg)
    elif isinstance(e, Neg):
        yield from _calls(e.operand)
    elif isinstance(e, Pow):
        yield from _calls(e.base)
    elif isinstance(e, BinOp):
        yield from _calls(e.left)
        yield from _calls(e.right)


def validate(e: Expr, field: Field = RATIONAL) -> None:
    """Reject function calls when the field is exact; they would leave the field."""
    if field.name == "float":
        return
    for c in _calls(e):
        raise FieldClosure(f"{c.func}() is not closed over the {field.name} field")


def as_monomial(e: Expr) -> tuple[Fraction, dict[str, int]] | None:
    """``(coefficient, {name: exponent})`` if ``e`` is a monomial, else ``None``.

    A monomial is a product or quotient of variables and integer powers of
    variables, with at most one rational literal.
    """
    literals = 0

    def walk(node):
        nonlocal literals
        if isinstance(node, Num):
            literals += 1
            return node.value, {}
        if isinstance(node, Var):
            return Fraction(1), {node.name: 1}
        if isinstance(node, Pow) and isinstance(node.base, Var):
            return Fraction(1), {node.base.name: node.exponent}
        if isinstance(node, Neg):
            sub = walk(node.operand)
            return None if sub is None else (-sub[0], sub[1])
        if isinstance(node, BinOp) and node.op in "*/":
            a, b = walk(node.left), walk(node.right)
            if a is None or b is None:
                return None
            sign = 1 if node.op == "*" else -1
            if sign < 0 and b[0] == 0:
                return None
            coef = a[0] * b[0] if sign > 0 else a[0] / b[0]
            exps = dict(a[1])
            for name, k in b[1].items():
                exps[name] = exps.get(name, 0) + sign * k
            return coef, exps
        return None

    result = walk(e)
    if result is None or literals > 1:
        return None
    coef, exps = result
    return coef, {k: v for k, v in exps.items() if v != 0}


# -- evaluation --------------------------------------------------------------


def evaluate(e: Expr, env: Mapping[str, object], field: Field = RATIONAL):
    """Evaluate over ``field``; a zero denominator raises ``EvaluationError``."""
    if isinstance(e, Num):
        return field.coerce(e.value)
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise UnknownVariable(e.name) from None
    if isinstance(e, Neg):
        return -evaluate(e.operand, env, field)
    if isinstance(e, BinOp):
        a = evaluate(e.left, env, field)
        b = evaluate(e.right, env, field)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if field.is_zero(b):
            raise EvaluationError("division by zero", render(e))
        return a / b
    if isinstance(e, Pow):
        a = evaluate(e.base, env, field)
        if e.exponent < 0 and field.is_zero(a):
            raise EvaluationError("zero raised to a negative power", render(e))
        return a**e.exponent
    if isinstance(e, Call):
        if field.name != "float":
            raise FieldClosure(f"{e.func}() is not closed over the {field.name} field")
        a = evaluate(e.arg, env, field)
        try:
            return FUNCTIONS[e.func](a)
        except (ValueError, OverflowError) as exc:
            raise EvaluationError(f"{e.func}() failed: {exc}", render(e)) from None
    raise TypeError(f"not an expression node: {e!r}")
