import json
import random

import pytest

from oracles import brute_bruhat
from poissonsplit.cgl import assemble_bivector, bott_samelson_chart, gu_chart, theorem_c_certificate
from poissonsplit.leaves import LeafIndex, enumerate_leaves, leaf_dimension, leaves_json
from poissonsplit.linalg import rank as matrix_rank
from poissonsplit.polyvec import matrix_at_point, rank_at_point
from poissonsplit.rootsys import RootSystem


def test_counts():
    assert len(enumerate_leaves(RootSystem("A1"))) == 3
    assert len(enumerate_leaves(RootSystem("A2"))) == 19
    assert len(enumerate_leaves(RootSystem("A2"), "GU")) == 19


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2"])
def test_counts_match_exhaustive_order(label):
    rs = RootSystem(label)
    oracle = brute_bruhat(rs.weyl)
    expected = sum(len([v for v in oracle if u in oracle[v]]) for u in oracle)
    assert len(enumerate_leaves(rs)) == expected


def test_dimension_examples():
    rs = RootSystem("A2")
    w0 = rs.weyl.longest_element
    assert leaf_dimension(LeafIndex(w0, (), "GB", 2)) == 3
    assert leaf_dimension(LeafIndex((1, 2), (1, 2), "GB", 2)) == 0
    assert leaf_dimension(LeafIndex(w0, (), "GU", 2)) == 5
    with pytest.raises(ValueError):
        LeafIndex((), (), "G", 1)


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_unique_maximal_leaf(label):
    rs = RootSystem(label)
    leaves = enumerate_leaves(rs)
    top = max(leaf_dimension(x) for x in leaves)
    best = [x for x in leaves if leaf_dimension(x) == top]
    assert [(x.u, x.v) for x in best] == [(rs.weyl.longest_element, ())]


def _torus_span_rank(pi, weights, point, p):
    cols = [list(r) for r in zip(*matrix_at_point(pi, point))]
    for b in range(weights.m):
        cols.append([weights.weights[i][b] * point[i] % p for i in range(pi.nvars)])
    return matrix_rank(cols, p)


def test_gu_open_leaf_dimension_from_pointwise_rank():
    p = 101
    rs = RootSystem("A2")
    chart = gu_chart(rs, p)
    rng = random.Random(0)
    top = LeafIndex(rs.weyl.longest_element, (), "GU", rs.rank)
    for _ in range(5):
        pt = [rng.randrange(1, p) for _ in range(chart.pi.nvars)]
        assert _torus_span_rank(chart.pi, chart.weights, pt, p) == leaf_dimension(top)


def test_gb_open_leaf_dimension_from_half_rank():
    # 2r from the certificate plus the n - 2r torus directions it adds
    p = 101
    rs = RootSystem("A2")
    d, wd = bott_samelson_chart(rs, rs.weyl.longest_element, [False] * 3)
    cand = theorem_c_certificate(d, p)
    top = LeafIndex(rs.weyl.longest_element, (), "GB", rs.rank)
    assert 2 * cand.r + len(cand.h_indices) == leaf_dimension(top)
    pi = assemble_bivector(d, p)
    rng = random.Random(1)
    for _ in range(5):
        pt = [rng.randrange(1, p) for _ in range(3)]
        assert rank_at_point(pi, pt) == 2 * cand.r
        assert _torus_span_rank(pi, wd, pt, p) == leaf_dimension(top)


def test_json_listing():
    obj = json.loads(leaves_json(enumerate_leaves(RootSystem("A1"))))
    assert sorted((x["u"], x["v"], x["dim"]) for x in obj) == [("1", "1", 0), ("1", "e", 1), ("e", "e", 0)]
    gu = json.loads(leaves_json(enumerate_leaves(RootSystem("A1"), "GU")))
    assert max(x["dim"] for x in gu) == 2
