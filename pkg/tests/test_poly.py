import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonsplit.errors import ArityMismatch, ParseError
from poissonsplit.poly import Poly, format_poly, parse_poly, var_names

X = ("x",)
XY = ("x", "y")


def P(text, names=XY, p=None):
    return parse_poly(text, names, p)


def test_derivative_examples():
    assert P("x^2", X, 5).partial_derivative(0) == P("2*x", X, 5)
    assert P("x^5", X, 5).partial_derivative(0).is_zero()
    assert P("(x+y)*(x-y)") == P("x^2 - y^2")


def test_power_examples():
    assert P("x", X).power(4) == P("x^4", X)
    assert P("x+1", X, 5).power(4) == P("x^4 + 4*x^3 + x^2 + 4*x + 1", X, 5)
    assert P("x*y+3").power(0) == 1


def test_coefficient_examples():
    f = P("x^2*y")
    assert f.coefficient_of((2, 1)) == 1
    assert f.coefficient_of((1, 1)) == 0
    assert P("3*x*y + 2*x").coefficient_of((1, 1)) == 3
    with pytest.raises(ArityMismatch):
        f.coefficient_of((1,))


def test_evaluate_examples():
    names = ("x", "y", "z")
    assert P("x*y + z", names).evaluate([1, 2, 3]) == 5
    f = P("3*x^2 + y - 7", names)
    assert f.evaluate([0, 0, 0]) == f.constant_term()
    assert P("x^2", X, 5).evaluate([3]) == 4
    with pytest.raises(ArityMismatch):
        f.evaluate([1, 2])


def test_ring_mismatch():
    with pytest.raises(ArityMismatch):
        P("x") + P("x", X)
    with pytest.raises(ArityMismatch):
        P("x", XY, 5) * P("x", XY, 7)


def test_format_parse_roundtrip_and_order():
    names = var_names("z", 2) + var_names("t", 2)
    f = parse_poly("3*z1^2*t2 - z1 + 4 + t1*t2", names)
    assert format_poly(f) == "3*z1^2*t2 + t1*t2 - z1 + 4"
    assert parse_poly(format_poly(f), names) == f
    g = parse_poly("1/2*x - y/3", XY)
    assert parse_poly(format_poly(g), XY) == g


@pytest.mark.parametrize("bad", ["x +", "x ** 2", "q", "x^y", "(x", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad, XY)


def _rand(rng, n, p, deg=4, terms=4):
    names = var_names("x", n)
    out = {}
    for _ in range(rng.randint(0, terms)):
        e = [0] * n
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(n)] += 1
        out[tuple(e)] = rng.randrange(p)
    return Poly(out, names, p)


def test_ring_axioms_and_leibniz_random():
    rng = random.Random(7)
    for _ in range(500):
        n = rng.randint(1, 6)
        p = rng.choice([5, 7, 11])
        f, g, h = (_rand(rng, n, p) for _ in range(3))
        assert (f + g) * h == f * h + g * h
        assert (f * g) * h == f * (g * h)
        assert f * g == g * f
        i = rng.randrange(n)
        assert (f * g).partial_derivative(i) == f.partial_derivative(i) * g + f * g.partial_derivative(i)
        pt = [rng.randrange(p) for _ in range(n)]
        assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt) % p


def test_power_matches_naive_product():
    rng = random.Random(8)
    for _ in range(100):
        n = rng.randint(1, 3)
        f = _rand(rng, n, 5, deg=3)
        naive = Poly.const(1, f.names, 5)
        for _ in range(4):
            naive = naive * f
        fp = f.power(4)
        assert fp == naive
        for e in naive.terms:
            assert fp.coefficient_of(e) == naive.coefficient_of(e)


coeffs = st.integers(min_value=-20, max_value=20)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, coeffs, max_size=5).map(lambda t: Poly(t, XY))


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_roundtrip_and_distributivity_hypothesis(f, g):
    assert parse_poly(format_poly(f), XY) == f
    assert (f - g) + g == f
    assert (f * g).partial_derivative(1) == f.partial_derivative(1) * g + f * g.partial_derivative(1)
