"""Regularity analysis, pi-groups, the reduced function and scaling laws.

Variables are indexed ``0..n``: index 0 is the output ``y_0``, indices
``1..r`` are the repeating variables ``x_1..x_r`` and ``r+1..n`` are
``y_1..y_{n-r}``. Row ``i`` of the exponent matrix expresses the dimension of
variable ``i`` (raised to its power, for powered slots) over the dimensions of
the repeating variables.

For a powered slot the variable ``z_k`` has dimension ``D_k`` and the scalar
model sees the measure of ``z_k^{P_k}``, whose dimension ``C_k = D_k^{P_k}``
lies in the lattice spanned by the repeating dimensions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import expr as ex
from .dimensions import (
    Dimension,
    ExponentMatrix,
    dim_mul,
    dim_pow,
    is_dimensionless,
    minimal_power,
    rational_solve,
)
from .errors import (
    DimensionMismatch,
    EvaluationError,
    NoIntegerSolution,
    NoRationalSolution,
    RankDeficient,
    SamplingExhausted,
    Unrepresentable,
    ZeroRepeatingVariable,
)
from .fields import RATIONAL, Field
from .quantity import Quantity, UnitTuple, measure_wrt, q_mul, q_pow

LAMBDAS = (Fraction(1, 3), Fraction(1, 2), Fraction(2), Fraction(3), Fraction(5))
RESAMPLE_FACTOR = 10

# errors a scalar model may raise at an unlucky sample point
EVAL_ERRORS = (EvaluationError, ZeroDivisionError, ArithmeticError, ValueError)


# -- models ------------------------------------------------------------------


@dataclass(frozen=True)
class RegularModel:
    names: tuple[str, ...]
    dims: tuple[Dimension, ...]
    r: int
    matrix: ExponentMatrix

    def __post_init__(self):
        n = len(self.dims) - 1
        if len(self.names) != n + 1:
            raise ValueError("need one name per dimension")
        if not 0 <= self.r <= n:
            raise ValueError(f"split index r={self.r} outside 0..{n}")
        if len(self.matrix.rows) != n + 1 or len(self.matrix.powers) != n - self.r + 1:
            raise ValueError("exponent matrix shape does not match the model")
        for j in range(1, self.r + 1):
            unit = tuple(int(i == j - 1) for i in range(self.r))
            if self.matrix.rows[j] != unit:
                raise ValueError(f"row {j} of a repeating variable must be the unit vector")
        for i in range(n + 1):
            if self.signature(i) != self._lattice_point(self.matrix.rows[i]):
                raise ValueError(f"row {i} does not represent the dimension of {self.names[i]}")

    def _lattice_point(self, row: Sequence[int]) -> Dimension:
        out = self.base.identity()
        for j, k in enumerate(row):
            out = dim_mul(out, dim_pow(self.dims[j + 1], k))
        return out

    @property
    def n(self) -> int:
        return len(self.dims) - 1

    @property
    def base(self):
        return self.dims[0].base

    @property
    def output(self) -> str:
        return self.names[0]

    @property
    def repeating(self) -> tuple[str, ...]:
        return self.names[1 : self.r + 1]

    @property
    def others(self) -> tuple[str, ...]:
        return self.names[self.r + 1 :]

    @property
    def powered(self) -> bool:
        return any(p != 1 for p in self.matrix.powers)

    def row(self, i: int) -> tuple[int, ...]:
        return self.matrix.rows[i]

    def power(self, i: int) -> int:
        if 1 <= i <= self.r:
            return 1
        return self.matrix.powers[0 if i == 0 else i - self.r]

    def signature(self, i: int) -> Dimension:
        """``C_i``: the dimension of the quantity the scalar model sees in slot ``i``."""
        return dim_pow(self.dims[i], self.power(i))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable named {name!r}") from None


def analyze_regularity(dims: Sequence[Dimension], r: int, names: Sequence[str] | None = None) -> RegularModel:
    """Solve every dimension over ``dims[1..r]``, falling back to powers when needed."""
    dims = tuple(dims)
    n = len(dims) - 1
    if n < 0:
        raise ValueError("need at least the output dimension")
    if not 0 <= r <= n:
        raise ValueError(f"split index r={r} outside 0..{n}")
    names = tuple(names) if names is not None else tuple(f"q{i}" for i in range(n + 1))
    basis = dims[1 : r + 1]
    bvecs = [d.exponents for d in basis]
    if basis:
        for d in dims:
            if d.base != basis[0].base:
                raise DimensionMismatch("all dimensions must share one base set")
    try:
        solutions = rational_solve(bvecs, [d.exponents for d in dims], dims[0].base.arity)
    except RankDeficient:
        raise RankDeficient(f"repeating variables {list(names[1:r + 1])} have dependent dimensions") from None
    rows, powers = [], [1]
    for i, sol in enumerate(solutions):
        if sol is None:
            raise NoRationalSolution(
                f"dimension of {names[i]!r} ({dims[i]}) is not representable over {list(names[1:r + 1])}",
                index=i,
                name=names[i],
            )
        if all(v.denominator == 1 for v in sol):
            p, row = 1, tuple(int(v) for v in sol)
        else:
            p, row = minimal_power(dims[i], basis)
        rows.append(row)
        if i == 0:
            powers[0] = p
        elif i > r:
            powers.append(p)
    return RegularModel(names, dims, r, ExponentMatrix(tuple(rows), tuple(powers)))


def auto_select_repeating(dims: Sequence[Dimension]) -> tuple[tuple[int, ...], int]:
    """Greedy left-to-right pick of a maximal independent set among ``dims[1..n]``.

    Returns the new order of variable indices ``1..n`` (chosen ones first,
    everything else in input order) and the number chosen.
    """
    n = len(dims) - 1
    if n < 1:
        raise ValueError("need at least one input variable")
    d = dims[0].base.arity
    chosen: list[int] = []
    for i in range(1, n + 1):
        try:
            rational_solve([dims[j].exponents for j in chosen + [i]], [], d)
        except RankDeficient:
            continue
        chosen.append(i)
    sols = rational_solve([dims[j].exponents for j in chosen], [dims[i].exponents for i in range(n + 1)], d)
    for i, sol in enumerate(sols):
        if sol is None:
            raise Unrepresentable(f"dimension {dims[i]} of variable {i} is outside the span of all inputs", index=i)
    rest = [i for i in range(1, n + 1) if i not in chosen]
    return tuple(chosen + rest), len(chosen)


def build_model(names: Sequence[str], dims: Sequence[Dimension], repeating: Sequence[str] | None = None) -> RegularModel:
    """Order the variables (explicit repeating list, else greedy choice) and analyse."""
    names = tuple(names)
    if repeating is not None:
        idx = []
        for name in repeating:
            if name not in names[1:]:
                raise KeyError(f"repeating variable {name!r} is not an input")
            idx.append(names.index(name))
        order = tuple(idx) + tuple(i for i in range(1, len(names)) if i not in idx)
        r = len(idx)
    else:
        try:
            order, r = auto_select_repeating(dims)
        except Unrepresentable as exc:
            raise NoRationalSolution(
                f"dimension of {names[exc.index]!r} ({dims[exc.index]}) is outside the span of all inputs",
                index=exc.index,
                name=names[exc.index],
            ) from None
    perm = (0,) + order
    return analyze_regularity([dims[i] for i in perm], r, [names[i] for i in perm])


# -- pi groups ---------------------------------------------------------------


@dataclass(frozen=True)
class PiGroup:
    """``pi_k = v^P * prod_j x_j^{e_j}`` with ``e`` the negated exponent row."""

    index: int
    variable: int
    name: str
    power: int
    exponents: tuple[int, ...]
    repeating: tuple[str, ...]
    numerator_dim: Dimension
    repeating_dims: tuple[Dimension, ...]

    def dimension(self) -> Dimension:
        out = dim_pow(self.numerator_dim, self.power)
        for d, e in zip(self.repeating_dims, self.exponents):
            out = dim_mul(out, dim_pow(d, e))
        return out

    def factors(self) -> list[tuple[str, int]]:
        out = [(self.name, self.power)]
        out += [(x, e) for x, e in zip(self.repeating, self.exponents) if e != 0]
        return out

    def product_text(self) -> str:
        return " * ".join(name if e == 1 else f"{name}^{e}" for name, e in self.factors())

    def render(self) -> str:
        return f"pi_{self.index} = {self.product_text()}"


def compute_pi_groups(model: RegularModel) -> list[PiGroup]:
    groups = []
    xdims = model.dims[1 : model.r + 1]
    for k in range(model.n - model.r + 1):
        i = 0 if k == 0 else model.r + k
        groups.append(
            PiGroup(
                index=k,
                variable=i,
                name=model.names[i],
                power=model.power(i),
                exponents=tuple(-v for v in model.row(i)),
                repeating=model.repeating,
                numerator_dim=model.dims[i],
                repeating_dims=xdims,
            )
        )
    return groups


def evaluate_pi(group: PiGroup, values: Sequence[Quantity]) -> Quantity:
    """Evaluate ``group`` on quantities listed in model order (index 0 = output).

    Slots the group does not use may hold anything.
    """
    r = len(group.repeating)
    xs = values[1 : r + 1]
    if len(xs) != r:
        raise ValueError(f"expected {r} repeating values")
    for name, x, d in zip(group.repeating, xs, group.repeating_dims):
        if x.dim != d:
            raise DimensionMismatch(f"{name} has dimension {x.dim}, expected {d}")
        if x.is_zero:
            raise ZeroRepeatingVariable(f"repeating variable {name} is zero")
    v = values[group.variable]
    if v.dim != group.numerator_dim:
        raise DimensionMismatch(f"{group.name} has dimension {v.dim}, expected {group.numerator_dim}")
    out = q_pow(v, group.power)
    for x, e in zip(xs, group.exponents):
        out = q_mul(out, q_pow(x, e))
    return out


# -- scalar models -----------------------------------------------------------


@dataclass(frozen=True)
class ScalarModel:
    """A function ``K^arity -> K``; ``reads_output`` marks a trailing output slot."""

    arity: int
    func: Callable[..., Any]
    names: tuple[str, ...] | None = None
    expr: Any = None
    reads_output: bool = False

    def __call__(self, *args):
        if len(args) != self.arity:
            raise TypeError(f"scalar model takes {self.arity} arguments, got {len(args)}")
        return self.func(*args)


def vocabulary(model: RegularModel) -> list[str]:
    """Names a scalar-model expression may use: each variable bare or as ``m_<name>``."""
    out = []
    for name in model.names:
        out += [name, f"m_{name}"]
    return out


def scalar_model(source: str | ex.Expr, model: RegularModel, field: Field = RATIONAL) -> ScalarModel:
    """Bind an expression to the input slots of ``model``.

    If the expression mentions the output variable the resulting model takes
    one extra trailing argument for it and is flagged ``reads_output``.
    """
    tree = ex.parse(source, vocabulary(model)) if isinstance(source, str) else source
    ex.validate(tree, field)
    used = ex.variables(tree)
    slot = {}
    for i, name in enumerate(model.names):
        slot[name] = slot[f"m_{name}"] = i
    unknown = used - set(slot)
    if unknown:
        raise ex.UnknownVariable(sorted(unknown)[0])
    reads_output = any(slot[v] == 0 for v in used)
    inputs = model.names[1:]
    order = inputs + ((model.names[0],) if reads_output else ())

    def func(*args):
        env = {}
        for name, value in zip(order, args):
            env[name] = env[f"m_{name}"] = value
        return ex.evaluate(tree, env, field)

    return ScalarModel(len(order), func, order, tree, reads_output)


def callback_model(func: Callable[..., Any], arity: int) -> ScalarModel:
    return ScalarModel(arity, func)


def omega(measures: Sequence[Any], model: RegularModel) -> tuple:
    """Reindex ``tau_E`` into repeating measures followed by the ``nu`` values."""
    r = model.r
    a = tuple(measures[:r])
    nus = []
    for k in range(1, model.n - r + 1):
        nus.append(measures[r + k - 1] / _monomial(a, model.row(r + k)))
    return a + tuple(nus)


def omega_inverse(coords: Sequence[Any], model: RegularModel) -> tuple:
    r = model.r
    a = tuple(coords[:r])
    ys = [coords[r + k - 1] * _monomial(a, model.row(r + k)) for k in range(1, model.n - r + 1)]
    return a + tuple(ys)


def _monomial(values: Sequence[Any], exponents: Sequence[int], one: Any = None):
    out = one
    for v, e in zip(values, exponents):
        term = v**e
        out = term if out is None else out * term
    return Fraction(1) if out is None else out


def construct_chi(phi: ScalarModel, model: RegularModel) -> ScalarModel:
    """``chi(a, nu) = phi(omega^-1(a, nu)) / prod_j a_j^{P_0j}``."""
    _check_arity(phi, model)

    def chi(*coords):
        a = coords[: model.r]
        return phi(*omega_inverse(coords, model)) / _monomial(a, model.row(0))

    return ScalarModel(model.n, chi)


def construct_psi(
    phi: ScalarModel, model: RegularModel, anchor: Sequence[Any] | None = None, field: Field = RATIONAL
) -> ScalarModel:
    """Reduced scalar function of the ``n - r`` pi-coordinates.

    ``anchor`` holds the measures of the repeating variables relative to some
    unit tuple; the default of all ones places them at the units themselves.
    For a covariant ``phi`` the result does not depend on the anchor.
    """
    chi = construct_chi(phi, model)
    if anchor is None:
        anchor = tuple(field.one() for _ in range(model.r))
    anchor = tuple(anchor)
    if len(anchor) != model.r:
        raise ValueError(f"anchor needs {model.r} entries")
    if any(field.is_zero(a) for a in anchor):
        raise ZeroRepeatingVariable("anchor measures must be non-zero")

    def psi(*nus):
        return chi(*anchor, *nus)

    names = tuple(f"pi_{k}" for k in range(1, model.n - model.r + 1))
    return ScalarModel(model.n - model.r, psi, names)


def psi_relative_to(
    phi: ScalarModel, model: RegularModel, units: UnitTuple | Sequence[Quantity], xs: Sequence[Quantity], field: Field = RATIONAL
) -> ScalarModel:
    """The reduced function obtained by measuring repeating values ``xs`` in ``units``."""
    r = model.r
    anchor = [measure_wrt(x, units, tuple(int(i == j) for i in range(r))) for j, x in enumerate(xs)]
    return construct_psi(phi, model, anchor, field)


def lift_psi(psi: ScalarModel, model: RegularModel, field: Field = RATIONAL) -> Callable[..., Quantity]:
    """``Psi(nu_1 . 1_Q, ...) = psi(nu_1, ...) . 1_Q`` on dimensionless quantities."""
    one = Quantity.one(model.base, field)

    def Psi(*pis: Quantity) -> Quantity:
        for p in pis:
            if not is_dimensionless(p.dim):
                raise DimensionMismatch(f"Psi takes dimensionless arguments, got {p.dim}")
        return Quantity(psi(*(p.measure for p in pis)) * one.measure, one.dim)

    return Psi


def _check_arity(phi: ScalarModel, model: RegularModel) -> None:
    want = model.n + (1 if phi.reads_output else 0)
    if phi.arity != want:
        raise ValueError(f"scalar model has arity {phi.arity}, model needs {want}")


# -- sampling and checks -----------------------------------------------------


@dataclass
class Counterexample:
    trial: int
    kind: str
    arguments: tuple
    lambdas: tuple
    lhs: Any
    rhs: Any


@dataclass
class CheckReport:
    """Outcome of a sampled check; success is evidence, a counterexample is proof."""

    check: str
    passed: bool
    trials: int
    seed: int
    failures: int = 0
    resampled: int = 0
    zero_checks: int = 0
    counterexample: Counterexample | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.passed


def _default_sampler(field: Field):
    return lambda rng, nonzero: field.sample(rng, nonzero)


class _Budget:
    def __init__(self, trials: int, what: str):
        self.cap = RESAMPLE_FACTOR * max(trials, 1)
        self.used = 0
        self.what = what

    def spend(self, exc: Exception) -> None:
        self.used += 1
        if self.used > self.cap:
            raise SamplingExhausted(
                f"{self.what}: scalar model failed to evaluate at {self.used} sample points (last error: {exc})"
            )


def check_covariance(
    phi: ScalarModel,
    model: RegularModel,
    trials: int = 100,
    seed: int = 0,
    field: Field = RATIONAL,
    sampler=None,
) -> CheckReport:
    """Sample unit changes and test ``phi(m') == prod_j lambda_j^{-P_0j} * phi(m)``.

    Under ``e_j -> lambda_j e_j`` every measure transforms as
    ``m_i -> m_i * prod_j lambda_j^{-P_ij}``.
    """
    _check_arity(phi, model)
    sampler = sampler or _default_sampler(field)
    rng = random.Random(seed)
    r, n = model.r, model.n
    report = CheckReport("covariance", True, trials, seed)
    budget = _Budget(trials, "covariance")
    lambdas = tuple(field.coerce(v) for v in LAMBDAS)
    for t in range(trials):
        while True:
            m = [sampler(rng, i <= r) for i in range(1, n + 1)]
            lam = tuple(rng.choice(lambdas) for _ in range(r))
            factors = [_monomial(lam, [-v for v in model.row(i)], field.one()) for i in range(n + 1)]
            m2 = [m[i - 1] * factors[i] for i in range(1, n + 1)]
            if phi.reads_output:
                m0 = sampler(rng, False)
                m.append(m0)
                m2.append(m0 * factors[0])
            try:
                lhs = phi(*m2)
                rhs = factors[0] * phi(*m)
            except EVAL_ERRORS as exc:
                budget.spend(exc)
                continue
            break
        if not field.eq(lhs, rhs):
            report.passed = False
            report.failures += 1
            if report.counterexample is None:
                report.counterexample = Counterexample(t, "covariance", tuple(m), lam, lhs, rhs)
    report.resampled = budget.used
    return report


def _sample_values(rng, model: RegularModel, sampler, field: Field) -> list[Quantity]:
    """Quantities in model order; slot 0 is a placeholder for the output."""
    vals = [Quantity(field.zero(), model.dims[0])]
    for i in range(1, model.n + 1):
        vals.append(Quantity(sampler(rng, i <= model.r), model.dims[i]))
    return vals


def _phi_quantity(phi: ScalarModel, model: RegularModel, vals: Sequence[Quantity]) -> Quantity:
    """``Phi`` on sampled quantities, through the canonical-basis measures."""
    args = [q_pow(vals[i], model.power(i)).measure for i in range(1, model.n + 1)]
    return Quantity(phi(*args), model.signature(0))


def verify_representation(
    phi: ScalarModel,
    model: RegularModel,
    trials: int = 100,
    seed: int = 0,
    field: Field = RATIONAL,
    sampler=None,
    zero_checks: bool = True,
) -> CheckReport:
    """Compare ``Phi(x, y)`` with ``prod_j x_j^{P_0j} * Psi(pi_1, ...)`` on samples.

    With ``zero_checks`` each trial also zeroes a random non-empty subset of
    the ``y`` slots and checks that ``Phi`` vanishes exactly when ``Psi`` does.
    """
    report = CheckReport("representation", True, trials, seed)
    if phi.reads_output:
        report.passed = False
        report.reason = f"scalar model reads the output variable {model.output!r}"
        return report
    _check_arity(phi, model)
    sampler = sampler or _default_sampler(field)
    rng = random.Random(seed)
    psi = construct_psi(phi, model, field=field)
    Psi = lift_psi(psi, model, field)
    groups = compute_pi_groups(model)[1:]
    budget = _Budget(trials, "representation")
    r, n = model.r, model.n

    def both_sides(vals):
        lhs = _phi_quantity(phi, model, vals)
        p0 = Quantity.one(model.base, field)
        for j in range(1, r + 1):
            p0 = q_mul(p0, q_pow(vals[j], model.row(0)[j - 1]))
        # the powered output is compared as z_0^{P_0}
        psi_q = Psi(*(evaluate_pi(g, vals) for g in groups))
        return lhs, q_mul(p0, psi_q), psi_q

    for t in range(trials):
        while True:
            vals = _sample_values(rng, model, sampler, field)
            zeroed = None
            if zero_checks and n > r:
                mask = [rng.random() < 0.5 for _ in range(n - r)]
                if not any(mask):
                    mask[rng.randrange(n - r)] = True
                zeroed = list(vals)
                for k, hit in enumerate(mask):
                    if hit:
                        zeroed[r + 1 + k] = Quantity(field.zero(), model.dims[r + 1 + k])
            try:
                lhs, rhs, _ = both_sides(vals)
                zero_sides = both_sides(zeroed) if zeroed is not None else None
            except EVAL_ERRORS as exc:
                budget.spend(exc)
                continue
            break
        args = tuple(v.measure for v in vals[1:])
        if lhs.dim != rhs.dim or not field.eq(lhs.measure, rhs.measure):
            report.passed = False
            report.failures += 1
            if report.counterexample is None:
                report.counterexample = Counterexample(t, "identity", args, (), lhs.measure, rhs.measure)
        if zero_sides is not None:
            report.zero_checks += 1
            zl, _, zpsi = zero_sides
            if field.is_zero(zl.measure) != field.is_zero(zpsi.measure):
                report.passed = False
                report.failures += 1
                if report.counterexample is None:
                    zargs = tuple(v.measure for v in zeroed[1:])
                    report.counterexample = Counterexample(t, "zero", zargs, (), zl.measure, zpsi.measure)
    report.resampled = budget.used
    return report


# -- scaling laws ------------------------------------------------------------


@dataclass(frozen=True)
class ScalingLaw:
    """``Phi(.., lambda x_j, ..) = lambda^{P_0j} Phi(..)`` with each ``y_k`` moved along."""

    model: RegularModel = dc_field(repr=False)
    j: int
    name: str
    exponent: int
    companions: tuple[tuple[str, int], ...]

    def identity_text(self) -> str:
        out = self.model.output
        if self.model.power(0) != 1:
            out = f"{out}^{self.model.power(0)}"
        lhs = f"{out}({self.name} -> lambda*{self.name})"
        moved = [f"{name} -> lambda^{e}*{name}" for name, e in self.companions if e != 0]
        text = f"{lhs} = lambda^{self.exponent} * {out}"
        if moved:
            text += " with " + ", ".join(moved)
        return text

    def verify(
        self,
        phi: ScalarModel,
        trials: int = 20,
        seed: int = 0,
        field: Field = RATIONAL,
        lambdas: Sequence[Any] | None = None,
        sampler=None,
    ) -> CheckReport:
        """Rescale ``x_j`` and the companions so every pi stays fixed, then compare."""
        model = self.model
        _check_arity(phi, model)
        sampler = sampler or _default_sampler(field)
        rng = random.Random(seed)
        lambdas = tuple(field.coerce(v) for v in (lambdas or LAMBDAS))
        report = CheckReport("scaling", True, trials, seed)
        budget = _Budget(trials, "scaling")
        r, n = model.r, model.n
        for t in range(trials):
            while True:
                m = [sampler(rng, i <= r) for i in range(1, n + 1)]
                lam = rng.choice(lambdas)
                m2 = [m[i - 1] * lam ** model.row(i)[self.j - 1] for i in range(1, n + 1)]
                try:
                    lhs = phi(*m2)
                    rhs = lam**self.exponent * phi(*m)
                except EVAL_ERRORS as exc:
                    budget.spend(exc)
                    continue
                break
            if not field.eq(lhs, rhs):
                report.passed = False
                report.failures += 1
                if report.counterexample is None:
                    report.counterexample = Counterexample(t, "scaling", tuple(m), (lam,), lhs, rhs)
        report.resampled = budget.used
        return report


def scaling_law(model: RegularModel, j: int | str) -> ScalingLaw:
    """Scaling exponent of the output in repeating variable ``j`` (1-based index or name)."""
    if isinstance(j, str):
        name = j
        j = model.index(j)
        if not 1 <= j <= model.r:
            raise KeyError(f"{name!r} is not a repeating variable")
    if not 1 <= j <= model.r:
        raise IndexError(f"repeating index {j} outside 1..{model.r}")
    companions = tuple((model.names[i], model.row(i)[j - 1]) for i in range(model.r + 1, model.n + 1))
    return ScalingLaw(model, j, model.names[j], model.row(0)[j - 1], companions)
