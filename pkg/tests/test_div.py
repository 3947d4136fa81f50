from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from logtrop.cones import Cone
from logtrop.div import (
    NonZeroSum,
    NotBalanced,
    SlopeMismatch,
    ValueMismatch,
    ZeroLength,
    check_div_gluing_square,
    div_cone,
    divergence,
    enumerate_balanced_slopes,
    glue_node_monoid,
    glue_pl_functions,
    gluing_weights,
    pl_function_from_slopes,
    restrict_glued,
)
from logtrop.graphs import StableGraph, enumerate_stable_graphs, smooth_graph
from logtrop.polynomial import Polynomial

from oracles import balanced_slopes_bruteforce

BANANA = StableGraph((0, 0), ((0, 1), (0, 1)), (0, 1))
DUMBBELL = StableGraph((0, 0), ((0, 1),), (0, 0, 1, 1))


def test_single_edge_slope():
    # edge oriented v0 -> v1; outgoing slope at v0 balances legs 1, 2
    res = enumerate_balanced_slopes(DUMBBELL, (2, 3, -1, -4), 5)
    assert res.assignments == ((-5,),)
    assert res.complete
    assert enumerate_balanced_slopes(DUMBBELL, (2, 3, -1, -4), 4).assignments == ()


def test_smooth_graph_has_empty_assignment():
    assert enumerate_balanced_slopes(smooth_graph(0, 3), (1, -1, 0), 2).assignments == ((),)
    with pytest.raises(NonZeroSum):
        enumerate_balanced_slopes(smooth_graph(0, 3), (1, 1, 0), 2)


def test_banana_matches_brute_force():
    res = enumerate_balanced_slopes(BANANA, (1, -1), 3)
    expected = balanced_slopes_bruteforce(2, BANANA.edges, BANANA.legs, (1, -1), 3)
    assert list(res.assignments) == sorted(map(tuple, expected))
    assert {s1 + s2 for s1, s2 in res.assignments} == {-1}
    assert len(res.assignments) == 6
    assert not res.complete


def test_edge_divergences_cancel():
    for g, _ in enumerate_stable_graphs(1, 3):
        a = (2, -1, -1)
        for slopes in enumerate_balanced_slopes(g, a, 3).assignments:
            assert sum(divergence(g, slopes, (0, 0, 0))) == 0
            assert divergence(g, slopes, a) == [0] * g.num_vertices


TREES = [g for sig in [(0, 4), (0, 5), (0, 6)] for g, _ in enumerate_stable_graphs(*sig) if g.h1 == 0 and g.num_edges]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TREES), st.randoms(use_true_random=False))
def test_trees_have_exactly_one_assignment(g, rnd):
    a = [rnd.randint(-3, 3) for _ in range(g.n - 1)]
    a.append(-sum(a))
    bound = sum(abs(x) for x in a)
    res = enumerate_balanced_slopes(g, a, bound)
    oracle = balanced_slopes_bruteforce(g.num_vertices, g.edges, g.legs, a, bound)
    assert len(res.assignments) == 1
    assert list(res.assignments) == [tuple(x) for x in oracle]


def test_div_cone_examples():
    for slopes in enumerate_balanced_slopes(BANANA, (1, -1), 3).assignments:
        cone = div_cone(BANANA, slopes, (1, -1))
        assert Cone.orthant(4).contains_cone(cone.image)
        if 0 in slopes:
            zero_at = slopes.index(0)
            # the other edge is forced to length 0, its partner and the legs are free
            assert cone.image.dim == 3
            assert all(r[1 - zero_at] == 0 for r in cone.image.rays)
        else:
            assert cone.image.dim == 2
            assert all(r[0] == r[1] == 0 for r in cone.image.rays)
    tree = div_cone(DUMBBELL, (-5,), (2, 3, -1, -4))
    assert tree.image == Cone.orthant(5)
    with pytest.raises(NotBalanced):
        div_cone(BANANA, (1, 1), (1, -1))


def test_pl_gluing_examples():
    a3 = smooth_graph(0, 3)
    c = Polynomial.var("c")
    f1 = pl_function_from_slopes(a3, (0, 0, 0), (0, 0, 0), "1.", c)
    f2 = pl_function_from_slopes(a3, (0, 0, 0), (0, 0, 0), "2.", c)
    glued = glue_pl_functions(f1, 3, f2, 1)
    assert glued.values == (c, c) and glued.problems() == []
    g1 = pl_function_from_slopes(a3, (), (0, -1, 1), "1.")
    g2 = pl_function_from_slopes(a3, (), (-1, 1, 0), "2.", Polynomial.var("1.l3") + Polynomial.var("2.l1"))
    glued = glue_pl_functions(g1, 3, g2, 1)
    assert glued.edge_slopes[-1] == 1
    assert glued.problems() == []
    with pytest.raises(SlopeMismatch):
        glue_pl_functions(g1, 3, pl_function_from_slopes(a3, (), (1, -1, 0), "2."), 1)
    with pytest.raises(ValueMismatch):
        glue_pl_functions(g1, 3, pl_function_from_slopes(a3, (), (-1, 1, 0), "2."), 1)


def _random_side(rnd, prefix, g, n, glued_slope):
    graphs_ = [x for x, _ in enumerate_stable_graphs(g, n)]
    graph = rnd.choice(graphs_)
    a = [rnd.randint(-2, 2) for _ in range(n - 1)]
    # put the glued slope on the last leg and rebalance on the first
    a.append(glued_slope)
    a[0] -= sum(a)
    slopes = enumerate_balanced_slopes(graph, a, 6).assignments
    return graph, a, rnd.choice(slopes) if slopes else None


@pytest.mark.parametrize("seed", range(20))
def test_pl_gluing_round_trip(seed):
    rnd = random.Random(seed)
    s = rnd.randint(-2, 2)
    while True:
        gr1, a1, sl1 = _random_side(rnd, "1.", rnd.randint(0, 1), 3, s)
        gr2, a2, sl2 = _random_side(rnd, "2.", 0, 3, -s)
        if sl1 is not None and sl2 is not None:
            break
    f1 = pl_function_from_slopes(gr1, sl1, a1, "1.")
    base = f1.endpoint_value(3) - Polynomial.var("2.l3") * (-s)
    # f2's last leg is glued; shift so both far ends agree
    f2 = pl_function_from_slopes(gr2, sl2, a2, "2.")
    f2 = f2.shifted(base - f2.endpoint_value(3) + Polynomial.var("2.l3") * (-s))
    glued = glue_pl_functions(f1, 3, f2, 3)
    assert glued.problems() == []
    assert glued.edge_slopes[-1] == s
    back1, back2 = restrict_glued(glued)
    assert back1 == f1 and back2 == f2
    # the negative case: flip the slope on one side
    if s:
        bad = pl_function_from_slopes(gr2, [-x for x in sl2], [-x for x in a2], "2.")
        with pytest.raises(SlopeMismatch):
            glue_pl_functions(f1, 3, bad, 3)


def test_monoid_examples():
    m = glue_node_monoid(1, (1,), (1,))
    assert set(m.generators) == {(1, 1), (2, 0), (0, 2)}
    assert m.contains((3, 1)) and not m.contains((2, 1))
    m2 = glue_node_monoid(1, (1,), (2,))
    assert m2.d == (3,)
    assert m2.contains((4, 1)) and not m2.contains((2, 1))
    with pytest.raises(ZeroLength):
        glue_node_monoid(1, (0,), (0,))


@pytest.mark.parametrize("k,l1,l2", [(1, (1,), (1,)), (1, (1,), (2,)), (2, (1, 0), (0, 1))])
def test_monoid_box_and_lattice(k, l1, l2):
    m = glue_node_monoid(k, l1, l2)
    assert m.is_sharp()
    assert m.closure_in_box(8) == m.members_in_box(8)
    assert m.group_lattice() == m.expected_lattice()


def test_gluing_weights():
    assert gluing_weights(2, (1, 1, -1, -1)) == ((1, 1, -2), (-1, -1, 2))
    assert gluing_weights(0, (1, -1)) == ((0,), (1, -1, 0))


@pytest.mark.parametrize(
    "sig,a",
    [((0, 2, 0, 2), (1, 1, -1, -1)), ((1, 0, 0, 2), (1, -1)), ((0, 2, 0, 3), (2, -1, 0, 1, -2)), ((1, 1, 0, 2), (2, -1, -1))],
)
def test_gluing_square(sig, a):
    report = check_div_gluing_square(*sig, a, 4)
    assert report.passed, report.mismatches
    assert report.strata_checked > 0
