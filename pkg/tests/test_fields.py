import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pi_lattice.fields import COMPLEX, FLOAT, RATIONAL, FloatField, GaussianRational, get_field

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
gaussians = st.builds(GaussianRational, fractions, fractions)


@pytest.mark.parametrize("strategy, zero, one", [(fractions, Fraction(0), Fraction(1)), (gaussians, GaussianRational(0), GaussianRational(1))])
@given(data=st.data())
def test_field_axioms(strategy, zero, one, data):
    a, b, c = data.draw(strategy), data.draw(strategy), data.draw(strategy)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a
    assert a + (-a) == zero
    if a != zero:
        assert a * (one / a) == one


def test_gaussian_rational_basics():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert (1 + i) ** -1 == GaussianRational(Fraction(1, 2), Fraction(-1, 2))
    assert Fraction(1, 2) + i == GaussianRational(Fraction(1, 2), 1)
    assert hash(GaussianRational(3)) == hash(Fraction(3))
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0) ** -1
    assert str(GaussianRational(1, -2)) == "1-2i"


@pytest.mark.parametrize("text, value", [("1-2i", GaussianRational(1, -2)), ("3/2", GaussianRational(Fraction(3, 2))), ("-i", GaussianRational(0, -1)), ("1/2+1/3i", GaussianRational(Fraction(1, 2), Fraction(1, 3)))])
def test_complex_parse(text, value):
    assert COMPLEX.parse(text) == value


def test_float_tolerance():
    assert FLOAT.eq(1.0, 1.0 + 1e-12)
    assert not FLOAT.eq(1.0, 1.0 + 1e-6)
    assert FloatField(rel_tol=1e-3).eq(1.0, 1.0001)


def test_rational_refuses_floats():
    with pytest.raises(TypeError):
        RATIONAL.coerce(0.1)


def test_sampling_bounds():
    rng = random.Random(1)
    for _ in range(500):
        v = RATIONAL.sample(rng, nonzero=True)
        assert v != 0 and abs(v.numerator) <= 10 and v.denominator <= 10
    for _ in range(100):
        assert COMPLEX.sample(rng, nonzero=True)


def test_get_field():
    assert get_field("float") is FLOAT
    with pytest.raises(ValueError):
        get_field("p-adic")
