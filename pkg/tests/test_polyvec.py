import itertools
import random
from math import factorial

import pytest

from oracles import (
    as_map,
    field_from_values,
    iterated_wedge_over_factorial,
    matching_sum_divided_power,
    random_bivector,
    random_log_canonical,
    random_poly,
    random_polyvector,
    schouten_oracle,
    wedge_oracle,
)
from poissonsplit.errors import ArityMismatch, DimensionMismatch
from poissonsplit.poly import Poly, parse_poly, var_names
from poissonsplit.polyvec import (
    PolyVector,
    TorusWeightData,
    divided_power,
    evaluate_multi,
    format_polyvector,
    generating_field,
    hamiltonian,
    is_weight_homogeneous,
    parse_polyvector,
    rank,
    rank_at_point,
)

N3 = var_names("x", 3)
N4 = var_names("x", 4)


def pv(text, names=N3, p=7):
    return parse_polyvector(text, names, p)


def poly(text, names=N3, p=7):
    return parse_poly(text, names, p)


# -- wedge ------------------------------------------------------------------

def test_wedge_examples():
    d1 = pv("d1")
    assert d1.wedge(d1).is_zero()
    assert pv("x1*d1").wedge(pv("x2*d2")) == pv("(x1*x2)*d1^d2")
    assert pv("d2").wedge(pv("d1")) == pv("-1*d1^d2")


def test_wedge_of_vector_fields_evaluates_as_determinant():
    rng = random.Random(1)
    for _ in range(50):
        X = random_polyvector(rng, 1, N3, 7, max_deg=2)
        Y = random_polyvector(rng, 1, N3, 7, max_deg=2)
        a, b = random_poly(rng, N3, 7), random_poly(rng, N3, 7)
        assert X.wedge(Y).evaluate([a, b]) == X.apply(a) * Y.apply(b) - X.apply(b) * Y.apply(a)


def test_wedge_agrees_with_shuffle_sum():
    rng = random.Random(2)
    for _ in range(60):
        m, n = rng.randint(0, 3), rng.randint(0, 2)
        a = random_polyvector(rng, m, N4, 7, max_deg=2, max_terms=2)
        b = random_polyvector(rng, n, N4, 7, max_deg=2, max_terms=2)
        ref = field_from_values(wedge_oracle(as_map(a), m, as_map(b), n), m + n, N4, 7)
        assert a.wedge(b) == ref


def test_graded_commutativity_of_wedge():
    rng = random.Random(3)
    for _ in range(40):
        m, n = rng.randint(0, 2), rng.randint(0, 2)
        a = random_polyvector(rng, m, N4, 7)
        b = random_polyvector(rng, n, N4, 7)
        sign = -1 if (m * n) % 2 else 1
        assert a.wedge(b) == b.wedge(a).scale(sign)


# -- Schouten bracket -----------------------------------------------------------

def test_schouten_examples():
    f, g = PolyVector.function(poly("x1^2")), PolyVector.function(poly("x2 + x3"))
    assert f.schouten(g).is_zero()
    X = pv("(x2)*d1 + (x1*x3)*d3")
    h = poly("x1^2*x3 + x2")
    assert X.schouten(PolyVector.function(h)) == PolyVector.function(X.apply(h))


@pytest.mark.parametrize("m,n", [(2, 1), (2, 2), (1, 2), (2, 0), (0, 2), (3, 1)])
def test_schouten_sign_pinned_against_shuffle_oracle(m, n):
    rng = random.Random(10 * m + n)
    for _ in range(15):
        a = random_polyvector(rng, m, N4, 7, max_deg=2, max_terms=2)
        b = random_polyvector(rng, n, N4, 7, max_deg=2, max_terms=2)
        ref = field_from_values(schouten_oracle(as_map(a), m, as_map(b), n), m + n - 1, N4, 7)
        assert a.schouten(b) == ref


def test_schouten_pinned_values():
    # [X, pi] is the Lie derivative: L_{x1 d2}(d1^d3) = [x1 d2, d1] ^ d3 = -d2^d3
    assert pv("x1*d2").schouten(pv("d1^d3")) == pv("-1*d2^d3")
    # [pi, f] is the Hamiltonian field of f
    pi = pv("(x1)*d1^d2 + (x1)*d1^d3")
    f = poly("x1*x2 + x3^2")
    assert pi.schouten(PolyVector.function(f)) == hamiltonian(f, pi)


def test_schouten_graded_antisymmetry():
    rng = random.Random(4)
    for _ in range(60):
        m, n = rng.randint(0, 3), rng.randint(0, 3)
        a = random_polyvector(rng, m, N4, 7, max_deg=2, max_terms=2)
        b = random_polyvector(rng, n, N4, 7, max_deg=2, max_terms=2)
        sign = 1 if ((m - 1) * (n - 1)) % 2 else -1
        assert a.schouten(b) == b.schouten(a).scale(sign)


def test_log_canonical_is_poisson_and_matches_oracle():
    rng = random.Random(5)
    for n in range(2, 6):
        for _ in range(5):
            pi = random_log_canonical(rng, n, 7)
            assert pi.schouten(pi).is_zero()
    names = var_names("x", 3)
    pi = random_log_canonical(rng, 3, 7)
    ref = field_from_values(schouten_oracle(as_map(pi), 2, as_map(pi), 2), 3, names, 7)
    assert ref.is_zero()


def test_self_bracket_is_minus_twice_the_jacobiator():
    rng = random.Random(6)
    found_nonpoisson = False
    for _ in range(40):
        pi = random_bivector(rng, 3, 7, max_deg=2, max_terms=3)
        x = [Poly.var(i, N3, 7) for i in range(3)]

        def br(a, b):
            return pi.evaluate([a, b])

        jac = br(x[0], br(x[1], x[2])) + br(x[1], br(x[2], x[0])) + br(x[2], br(x[0], x[1]))
        assert pi.schouten(pi).coefficient((0, 1, 2)) == jac * (-2)
        assert pi.schouten(pi).is_zero() == jac.is_zero()
        found_nonpoisson |= not jac.is_zero()
    assert found_nonpoisson


def test_schouten_ring_mismatch():
    with pytest.raises(ArityMismatch):
        pv("d1").schouten(parse_polyvector("d1", N4, 7))


# -- evaluation -----------------------------------------------------------------

def test_evaluate_examples():
    d12 = pv("d1^d2")
    x1, x2 = poly("x1"), poly("x2")
    assert evaluate_multi(d12, [x1, x2]) == 1
    assert evaluate_multi(d12, [x2, x1]) == -1
    pi = pv("(x3)*d1^d2 + (3*x1^2)*d2^d3")
    x = [poly(f"x{i}") for i in (1, 2, 3)]
    assert pi.evaluate([x[0], x[1]]) == poly("x3")
    assert pi.evaluate([x[1], x[2]]) == poly("3*x1^2")
    assert pi.evaluate([x[0], x[2]]).is_zero()
    with pytest.raises(ArityMismatch):
        pi.evaluate([x[0]])


def test_evaluate_multilinear_alternating_leibniz():
    rng = random.Random(7)
    for _ in range(30):
        A = random_polyvector(rng, 3, N4, 7, max_deg=1, max_terms=2)
        f, g, h, k = (random_poly(rng, N4, 7, max_deg=2) for _ in range(4))
        assert A.evaluate([f, g, h]) == -A.evaluate([g, f, h])
        assert A.evaluate([f, g, g]).is_zero()
        assert A.evaluate([f + k, g, h]) == A.evaluate([f, g, h]) + A.evaluate([k, g, h])
        assert A.evaluate([f * k, g, h]) == f * A.evaluate([k, g, h]) + k * A.evaluate([f, g, h])


# -- divided powers and rank ------------------------------------------------------

def test_divided_power_examples():
    pi = parse_polyvector("d1^d2 + d3^d4", N4, 7)
    assert divided_power(pi, 2) == parse_polyvector("d1^d2^d3^d4", N4, 7)
    rng = random.Random(8)
    for _ in range(10):
        q = random_bivector(rng, 4, 7)
        assert divided_power(q, 1) == q


def test_divided_power_against_matching_sum_definition():
    rng = random.Random(9)
    for _ in range(15):
        n = rng.randint(2, 5)
        pi = random_bivector(rng, n, 7, max_deg=1, max_terms=2)
        for r in range(1, n // 2 + 1):
            ref = field_from_values(matching_sum_divided_power(pi, r), 2 * r, pi.names, 7)
            assert divided_power(pi, r) == ref


def test_divided_power_beyond_characteristic():
    # r! vanishes mod 5 for r = 5, but pi^[5] of the standard form on 10 variables is d_1^...^d_10
    names = var_names("x", 10)
    coeffs = {(2 * k, 2 * k + 1): Poly.const(1, names, 5) for k in range(5)}
    pi = PolyVector.bivector(coeffs, names, 5)
    top = divided_power(pi, 5)
    assert top == PolyVector.basis(range(10), names, 5)
    assert iterated_wedge_over_factorial(pi, 4) == divided_power(pi, 4)
    assert pi.wedge(pi).wedge(pi).wedge(pi).wedge(pi).is_zero()
    assert factorial(5) % 5 == 0


def test_rank_examples():
    pi = pv("(x1)*d1^d2 + (x1)*d1^d3")
    assert rank(pi) == 2
    assert rank(PolyVector.zero(2, N3, 7)) == 0
    assert rank(parse_polyvector("d1^d2 + d3^d4", N4, 7)) == 4


def test_rank_at_point_examples():
    pi = pv("(x1)*d1^d2 + (x1)*d1^d3")
    for y, z in itertools.product(range(7), repeat=2):
        assert rank_at_point(pi, [0, y, z]) == 0
    assert rank_at_point(pi, [1, 0, 0]) == 2
    assert rank_at_point(PolyVector.zero(2, N3, 7), [1, 2, 3]) == 0
    with pytest.raises(ArityMismatch):
        rank_at_point(pi, [1, 2])


def test_rank_bounds_pointwise_rank():
    rng = random.Random(10)
    for _ in range(20):
        n = rng.randint(2, 5)
        pi = random_bivector(rng, n, 7, max_deg=2, max_terms=2)
        R = rank(pi)
        assert R % 2 == 0
        for _ in range(20):
            pt = [rng.randrange(7) for _ in range(n)]
            r_pt = rank_at_point(pi, pt)
            assert r_pt % 2 == 0 and r_pt <= R


# -- Hamiltonian and generating fields ------------------------------------------------

def test_hamiltonian_examples():
    pi = parse_polyvector("(x1*x2)*d1^d2", var_names("x", 2), 7)
    x1 = parse_poly("x1", var_names("x", 2), 7)
    assert hamiltonian(x1, pi) == parse_polyvector("(x1*x2)*d2", var_names("x", 2), 7)
    assert hamiltonian(Poly.const(3, var_names("x", 2), 7), pi).is_zero()


def test_hamiltonian_evaluates_bracket():
    rng = random.Random(11)
    for _ in range(30):
        pi = random_bivector(rng, 4, 7, max_deg=2)
        a, b = random_poly(rng, N4, 7), random_poly(rng, N4, 7)
        assert hamiltonian(a, pi).apply(b) == pi.evaluate([a, b])


def test_divided_power_kills_hamiltonians():
    rng = random.Random(12)
    for _ in range(30):
        n = rng.randint(2, 5)
        pi = random_log_canonical(rng, n, 7)
        r = rank(pi) // 2
        a = random_poly(rng, pi.names, 7)
        assert divided_power(pi, r).wedge(hamiltonian(a, pi)).is_zero()


def test_generating_field_examples():
    wd = TorusWeightData(((1, 0), (0, 1)))
    names = var_names("x", 2)
    assert generating_field((1, 0), wd, names, 7) == parse_polyvector("(x1)*d1", names, 7)
    assert generating_field((0, 0), wd, names, 7).is_zero()
    with pytest.raises(DimensionMismatch):
        generating_field((1, 0, 0), wd, names, 7)


def test_generating_field_is_poisson_derivation():
    rng = random.Random(13)
    for _ in range(30):
        n = rng.randint(2, 4)
        m = rng.randint(1, 3)
        wd = TorusWeightData(tuple(tuple(rng.randint(-2, 2) for _ in range(m)) for _ in range(n)))
        pi = random_log_canonical(rng, n, 7)
        assert is_weight_homogeneous(pi, wd)
        h = [rng.randint(-3, 3) for _ in range(m)]
        assert generating_field(h, wd, pi.names, 7).schouten(pi).is_zero()
    # a non-homogeneous bivector is not preserved
    wd = TorusWeightData(((1,), (0,)))
    pi = parse_polyvector("(x2)*d1^d2", var_names("x", 2), 7)
    assert not is_weight_homogeneous(pi, wd)
    assert not generating_field((1,), wd, pi.names, 7).schouten(pi).is_zero()


def test_divided_power_recursion():
    rng = random.Random(14)
    for _ in range(20):
        n = rng.randint(2, 6)
        pi = random_bivector(rng, n, 7, max_deg=1, max_terms=2)
        for l in range(1, min(3, n // 2) + 1):
            args = [random_poly(rng, pi.names, 7, max_deg=2, max_terms=2) for _ in range(2 * l)]
            lhs = divided_power(pi, l).evaluate(args)
            rest = divided_power(pi, l - 1).wedge(hamiltonian(args[-1], pi))
            assert lhs == -rest.evaluate(args[:-1])


# -- text syntax ------------------------------------------------------------------

def test_polyvector_text_roundtrip():
    rng = random.Random(15)
    for _ in range(30):
        k = rng.randint(1, 3)
        A = random_polyvector(rng, k, N4, 7)
        if A.is_zero():
            continue
        assert parse_polyvector(format_polyvector(A), N4, 7) == A
    assert format_polyvector(pv("3*d1^d3")) == "(3)*d1^d3"
    assert pv("(x1 - x2)*d2^d3 - d1^d2") == PolyVector.bivector(
        {(1, 2): poly("x1 - x2"), (0, 1): poly("-1")}, N3, 7
    )
