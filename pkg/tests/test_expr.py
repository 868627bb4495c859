import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import TREE_VARS, random_tree, reference_eval

from pi_lattice import expr as ex
from pi_lattice.errors import EvaluationError, FieldClosure, NonIntegerExponent, ParseError, UnknownVariable
from pi_lattice.fields import COMPLEX, FLOAT, RATIONAL, GaussianRational

DRAG_VOCAB = ["m_F", "m_rho", "m_v", "m_d", "m_mu"]


def test_parse_structure():
    e = ex.parse("m_F / (m_rho * m_v^2 * m_d^2)", DRAG_VOCAB)
    assert isinstance(e, ex.BinOp) and e.op == "/"
    assert e.left == ex.Var("m_F")
    assert ex.parse("3/4 * g", ["g"]) == ex.BinOp("*", ex.Num(Fraction(3, 4)), ex.Var("g"))


def test_rational_literal_needs_adjacency():
    assert ex.parse("3/4") == ex.Num(Fraction(3, 4))
    assert ex.parse("3 / 4") == ex.BinOp("/", ex.Num(Fraction(3)), ex.Num(Fraction(4)))


def test_decimals_are_exact():
    assert ex.parse("0.25") == ex.Num(Fraction(1, 4))
    assert ex.evaluate(ex.parse("0.1 + 0.2"), {}) == Fraction(3, 10)


def test_non_integer_exponent():
    with pytest.raises(NonIntegerExponent):
        ex.parse("x ^ y", ["x", "y"])
    with pytest.raises(NonIntegerExponent):
        ex.parse("x ^ 2.5", ["x"])
    with pytest.raises(NonIntegerExponent):
        ex.parse("x ^ (1 + 1)", ["x"])


def test_unknown_variable_and_syntax_errors():
    with pytest.raises(UnknownVariable) as info:
        ex.parse("x + q", ["x"])
    assert info.value.name == "q" and info.value.position == 4
    with pytest.raises(ParseError) as info:
        ex.parse("2x", ["x"])
    assert info.value.position == 1
    for bad in ["", "(x", "x +", "x $ y", "3/0"]:
        with pytest.raises(ParseError):
            ex.parse(bad, ["x", "y"])


def test_evaluate_examples():
    env = {"x": Fraction(1, 2), "y": Fraction(1, 3)}
    assert ex.evaluate(ex.parse("x + y"), env) == Fraction(5, 6)
    with pytest.raises(EvaluationError):
        ex.evaluate(ex.parse("x / y"), {"x": Fraction(1), "y": Fraction(0)})
    assert ex.evaluate(ex.parse("x^(-2)"), {"x": Fraction(3)}) == Fraction(1, 9)
    assert ex.evaluate(ex.parse("x^-2"), {"x": Fraction(3)}) == Fraction(1, 9)
    assert ex.evaluate(ex.parse("-x^2"), {"x": Fraction(3)}) == -9


def test_zero_to_negative_power():
    with pytest.raises(EvaluationError) as info:
        ex.evaluate(ex.parse("x^-1"), {"x": Fraction(0)})
    assert "x^-1" in str(info.value)


def test_function_calls_only_over_floats():
    e = ex.parse("sqrt(x) + exp(0)", ["x"])
    assert ex.evaluate(e, {"x": 4.0}, FLOAT) == 3.0
    with pytest.raises(FieldClosure):
        ex.validate(e, RATIONAL)
    with pytest.raises(FieldClosure):
        ex.evaluate(e, {"x": Fraction(4)}, RATIONAL)
    with pytest.raises(EvaluationError):
        ex.evaluate(ex.parse("ln(x)"), {"x": -1.0}, FLOAT)
    assert math.isclose(ex.evaluate(ex.parse("sin(x)"), {"x": 1.0}, FLOAT), math.sin(1.0))


def test_complex_evaluation():
    i = GaussianRational(0, 1)
    assert ex.evaluate(ex.parse("x * x + 1"), {"x": i}, COMPLEX) == 0


def test_round_trip_random_trees():
    rng = random.Random(11)
    for _ in range(2000):
        t = random_tree(rng, 6, calls=True)
        assert ex.parse(ex.render(t)) == t


@st.composite
def trees(draw):
    leaf = st.one_of(
        st.sampled_from(TREE_VARS).map(ex.Var),
        st.fractions(min_value=0, max_value=50, max_denominator=9).map(ex.Num),
    )

    def extend(children):
        return st.one_of(
            st.builds(ex.BinOp, st.sampled_from("+-*/"), children, children),
            st.builds(ex.Neg, children),
            st.builds(ex.Pow, children, st.integers(-4, 4)),
            st.builds(ex.Call, st.sampled_from(sorted(ex.FUNCTIONS)), children),
        )

    return draw(st.recursive(leaf, extend, max_leaves=12))


@settings(max_examples=300)
@given(trees())
def test_round_trip_property(t):
    assert ex.parse(ex.render(t)) == t


def test_exact_evaluation_matches_integer_reference():
    rng = random.Random(5)
    for _ in range(1000):
        t = random_tree(rng, 5, division=False)
        env_pairs = {v: (rng.randint(-9, 9), rng.randint(1, 9)) for v in TREE_VARS}
        env = {v: Fraction(n, d) for v, (n, d) in env_pairs.items()}
        got = ex.evaluate(t, env)
        n, d = reference_eval(t, env_pairs)
        assert got.numerator * d == n * got.denominator


def _brute_monomial(e):
    """Structural check by listing every node; independent of as_monomial's recursion."""
    nodes = []

    def collect(node, parent):
        nodes.append((node, parent))
        for child in (getattr(node, a) for a in ("left", "right", "operand", "base", "arg") if hasattr(node, a)):
            collect(child, node)

    collect(e, None)
    literals = 0
    for node, parent in nodes:
        if isinstance(node, ex.Call) or (isinstance(node, ex.BinOp) and node.op in "+-"):
            return False
        if isinstance(node, ex.Pow) and not isinstance(node.base, ex.Var):
            return False
        if isinstance(node, ex.Num):
            literals += 1
        if isinstance(node, ex.BinOp) and node.op == "/" and isinstance(node.right, ex.Num) and node.right.value == 0:
            return False
    return literals <= 1


def test_monomial_classifier_agrees_with_brute_force():
    rng = random.Random(2)
    seen = {True: 0, False: 0}
    for _ in range(3000):
        t = random_tree(rng, 4)
        if rng.random() < 0.5:
            # bias towards products so both verdicts are common
            t = ex.BinOp(rng.choice("*/"), ex.Var("x"), ex.Pow(ex.Var(rng.choice(TREE_VARS)), rng.randint(-3, 3)))
            if rng.random() < 0.5:
                t = ex.BinOp("*", ex.Num(Fraction(rng.randint(1, 9), 2)), t)
        mono = ex.as_monomial(t)
        assert (mono is not None) == _brute_monomial(t)
        seen[mono is not None] += 1
        if mono is not None:
            coef, exps = mono
            env = {v: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for v in TREE_VARS}
            value = coef
            for name, k in exps.items():
                value *= env[name] ** k
            assert ex.evaluate(t, env) == value
    assert seen[True] > 100 and seen[False] > 100


def test_monomial_examples():
    assert ex.as_monomial(ex.parse("3/4 * x^2 / y")) == (Fraction(3, 4), {"x": 2, "y": -1})
    assert ex.as_monomial(ex.parse("x + y")) is None
    assert ex.as_monomial(ex.parse("2 * x * 3")) is None


def test_variables():
    assert ex.variables(ex.parse("x * (y + 1)^2 - -m_z")) == {"x", "y", "m_z"}
