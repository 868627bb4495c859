from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import BOX, brute_integer_solutions, brute_least_power, classify

from pi_lattice import (
    BaseDimensionSet,
    Dimension,
    dim_mul,
    dim_pow,
    is_dimensionless,
    minimal_power,
    solve_representation,
)
from pi_lattice.errors import BaseSetMismatch, NoIntegerSolution, NoRationalSolution, RankDeficient

LT = BaseDimensionSet(["L", "T"])
LTM = BaseDimensionSet(["L", "T", "M"])
MLT = BaseDimensionSet(["M", "L", "T"])
THREE = BaseDimensionSet(["a", "b", "c"])


def test_base_set_validation():
    with pytest.raises(ValueError):
        BaseDimensionSet(["L", "L"])
    with pytest.raises(ValueError):
        BaseDimensionSet(["L", ""])
    assert LT.arity == 2
    assert LT(L=1, T=-2).exponents == (1, -2)


def test_dimension_rejects_non_integer_exponents():
    with pytest.raises(TypeError):
        Dimension(LT, [Fraction(1, 2), 0])
    with pytest.raises(ValueError):
        Dimension(LT, [1, 0, 0])


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ([1, 0, -1], [0, 0, 1], [1, 0, 0]),
        ([0, 0, 0], [2, 1, -3], [2, 1, -3]),
        ([1, -3, 0], [1, -3, 0], [2, -6, 0]),
    ],
)
def test_dim_mul_examples(a, b, expected):
    assert dim_mul(THREE(a), THREE(b)) == THREE(expected)


@pytest.mark.parametrize("k, expected", [(3, [3, -6]), (0, [0, 0]), (-1, [-1, 2])])
def test_dim_pow_examples(k, expected):
    assert dim_pow(LT([1, -2]), k) == LT(expected)


def test_is_dimensionless():
    assert is_dimensionless(THREE([0, 0, 0]))
    assert not is_dimensionless(THREE([0, 1, 0]))


def test_mismatched_base_sets():
    with pytest.raises(BaseSetMismatch):
        dim_mul(LT([1, 0]), BaseDimensionSet(["X", "Y"])([1, 0]))


def test_str():
    assert str(MLT([1, 1, -2])) == "M L T^-2"
    assert str(MLT.identity()) == "1"


vec3 = st.lists(st.integers(-20, 20), min_size=3, max_size=3).map(THREE)


@given(vec3, vec3, vec3)
def test_group_laws(a, b, c):
    assert dim_mul(dim_mul(a, b), c) == dim_mul(a, dim_mul(b, c))
    assert dim_mul(a, b) == dim_mul(b, a)
    assert dim_mul(a, THREE.identity()) == a
    assert is_dimensionless(dim_mul(a, a.inverse()))
    assert a / b == dim_mul(a, dim_pow(b, -1))


def test_solve_examples():
    m = solve_representation([LT([1, -2])], [LT([1, 0]), LT([0, 1])])
    assert m.rows == ((1, -2),)
    m = solve_representation([MLT([1, -1, -1])], [MLT([1, -3, 0]), MLT([0, 1, -1]), MLT([0, 1, 0])])
    assert m.rows == ((1, 1, 1),)
    with pytest.raises(NoRationalSolution):
        solve_representation([LTM([0, 0, 1])], [LTM([1, 0, 0]), LTM([0, 1, 0])])


def test_solve_examples_agree_with_brute_force():
    # frozen values above come from this search over [-4, 4]^r
    assert brute_integer_solutions([[1, 0], [0, 1]], [1, -2], box=4) == [(1, -2)]
    assert brute_integer_solutions([[1, -3, 0], [0, 1, -1], [0, 1, 0]], [1, -1, -1], box=4) == [(1, 1, 1)]


def test_rank_deficient_detected_first():
    basis = [LT([1, 0]), LT([2, 0])]
    with pytest.raises(RankDeficient):
        solve_representation([LT([0, 1])], basis)


def test_no_integer_solution_carries_rational_solution():
    with pytest.raises(NoIntegerSolution) as info:
        solve_representation([LT([0, 1])], [LT([1, 0]), LT([1, -2])])
    assert info.value.solution == (Fraction(1, 2), Fraction(-1, 2))


def test_empty_basis():
    assert solve_representation([LT([0, 0])], []).rows == ((),)
    with pytest.raises(NoRationalSolution):
        solve_representation([LT([1, 0])], [])


def test_identity_prefix():
    basis = [MLT([1, -3, 0]), MLT([0, 1, -1]), MLT([0, 1, 0])]
    assert solve_representation(basis, basis).rows == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_minimal_power_examples():
    assert minimal_power(LT([0, 1]), [LT([1, 0]), LT([1, -2])]) == (2, (1, -1))
    assert minimal_power(LT([1, 0]), [LT([1, 0])]) == (1, (1,))
    with pytest.raises(NoRationalSolution):
        minimal_power(LTM([0, 0, 1]), [LTM([1, 0, 0]), LTM([0, 1, 0])])
    with pytest.raises(RankDeficient):
        minimal_power(LT([0, 1]), [LT([1, 0]), LT([2, 0])])


def test_minimal_power_pendulum_by_brute_force():
    assert brute_least_power([[1, 0], [1, -2]], [0, 1]) == 2


small = st.integers(-3, 3)


@st.composite
def instances(draw):
    d = draw(st.integers(1, 3))
    r = draw(st.integers(0, 3))
    basis = draw(st.lists(st.lists(small, min_size=d, max_size=d), min_size=r, max_size=r))
    target = draw(st.lists(small, min_size=d, max_size=d))
    return d, basis, target


def _solver_answer(d, basis, target):
    base = BaseDimensionSet([f"s{i}" for i in range(d)])
    try:
        m = solve_representation([base(target)], [base(b) for b in basis])
    except RankDeficient:
        return ("rank",)
    except NoRationalSolution:
        return ("norational",)
    except NoIntegerSolution:
        return ("nointeger",)
    return ("solution", m.rows[0])


@settings(max_examples=300, deadline=None)
@given(instances())
def test_solver_matches_oracle(inst):
    d, basis, target = inst
    expected, _ = classify(basis, target)
    assert _solver_answer(d, basis, target) == expected


@settings(max_examples=300, deadline=None)
@given(instances())
def test_solver_soundness(inst):
    d, basis, target = inst
    got = _solver_answer(d, basis, target)
    if got[0] == "solution":
        z = got[1]
        assert [sum(z[j] * basis[j][i] for j in range(len(basis))) for i in range(d)] == target
        if all(abs(v) <= BOX for v in z):
            assert brute_integer_solutions(basis, target) == [z]


@settings(max_examples=200, deadline=None)
@given(instances())
def test_minimal_power_divides_every_valid_power(inst):
    d, basis, target = inst
    base = BaseDimensionSet([f"s{i}" for i in range(d)])
    try:
        p, z = minimal_power(base(target), [base(b) for b in basis])
    except (RankDeficient, NoRationalSolution):
        return
    assert [sum(z[j] * basis[j][i] for j in range(len(basis))) for i in range(d)] == [p * t for t in target]
    least = brute_least_power(basis, target)
    assert least == (p if p <= 24 else None)
    for q in range(1, 25):
        if brute_integer_solutions(basis, [q * t for t in target]):
            assert q % p == 0
