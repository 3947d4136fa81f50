from __future__ import annotations

import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from logtrop.graphs import smooth_graph
from logtrop.moduli import build_moduli, forgetful_morphism, gluing_morphism, loop_gluing_morphism
from logtrop.polynomial import Polynomial
from logtrop.pp import (
    BaseMismatch,
    DegreeError,
    NonNilpotentExp,
    NonZeroSumWarning,
    NotOneEdge,
    NotPointed,
    PPClass,
    Piecewise,
    boundary_class,
    dr_polynomial,
    edge_type_graph,
    exp_truncated,
    length_class,
    lift_to_pointed,
    phi_class,
    pullback,
    star_subdivide_stack,
    vanishing_off_ray,
)

from oracles import forgotten_leg_terms


def var(x):
    return Polynomial.var(x)


def tail_oracle(graph, forgotten: int) -> dict:
    terms = forgotten_leg_terms(graph.genera, graph.edges, graph.legs, forgotten)
    return {j: Polynomial.linear({x: 1 for x in labels}) for j, labels in terms.items()}


@pytest.mark.parametrize("g,n", [(0, 4), (1, 2), (0, 5), (1, 3)])
def test_forgetful_pullback_of_lengths(g, n):
    m = forgetful_morphism(g, n - 1)
    for j in range(1, n):
        pulled = pullback(m, length_class(build_moduli(g, n - 1), j))
        for s in m.source:
            expected = tail_oracle(s.graph, n)[j]
            # the target leg j is renamed l_j in the source, so only the edge term moves
            assert pulled.poly(s.key) == expected, (s.graph, j)


def test_length_class_basics():
    s = build_moduli(0, 3)
    l1 = length_class(s, 1)
    assert l1.poly(next(iter(s.strata))) == var("l1")
    assert l1.on(next(iter(s.strata))).restrict_zero("l1").is_zero()
    assert l1.validate().ok
    with pytest.raises(NotPointed):
        length_class(build_moduli(0, 3, pointed=False), 1)


def test_boundary_class_examples():
    s = build_moduli(0, 5)
    delta = edge_type_graph(0, 5, [1, 2])
    b = boundary_class(s, delta)
    assert b.validate().ok
    assert b.poly(delta.digest) == var("e0")
    assert b.poly(smooth_graph(0, 5).digest).is_zero()
    for st_ in s:
        g = st_.graph
        expected = Polynomial()
        for k, (u, w) in enumerate(g.edges):
            # legs on the side of u after deleting edge k
            side = {u}
            todo = [u]
            while todo:
                x = todo.pop()
                for j, (a, c) in enumerate(g.edges):
                    if j == k:
                        continue
                    for y, z in ((a, c), (c, a)):
                        if y == x and z not in side:
                            side.add(z)
                            todo.append(z)
            legs = {i + 1 for i, v in enumerate(g.legs) if v in side}
            if legs in ({1, 2}, {3, 4, 5}):
                expected = expected + var(f"e{k}")
        assert b.poly(st_.key) == expected
    with pytest.raises(NotOneEdge):
        boundary_class(s, smooth_graph(0, 5))


def test_ring_operations():
    s = build_moduli(0, 3)
    l1, l2 = length_class(s, 1), length_class(s, 2)
    assert (l1 + (-l1)).is_zero()
    assert exp_truncated(l1, 3).graded_part(1) == l1
    prod = l1 * l2
    assert prod.is_homogeneous(2)
    assert prod.poly(next(iter(s.strata))) == var("l1") * var("l2")
    with pytest.raises(NonNilpotentExp):
        exp_truncated(l1 + 1, 2)
    with pytest.raises(BaseMismatch):
        l1 + length_class(build_moduli(0, 4), 1)


def test_validate_reports_face_violation():
    s = build_moduli(1, 1)
    loop = next(x for x in s if x.dim == 2)
    bad = PPClass.from_function(s, lambda x: var("e0") if x.key == loop.key else Polynomial.constant(1))
    report = bad.validate()
    assert not report.ok
    assert any(v.kind == "face" for v in report.violations)


def test_pullback_of_one_and_gluing_term():
    m = gluing_morphism(0, 2, 0, 2)
    assert pullback(m, PPClass.constant(m.target, 1)) == PPClass.constant(m.source, 1)
    b = boundary_class(build_moduli(0, 4), edge_type_graph(0, 4, [1, 2]))
    pulled = pullback(m, b)
    (key,) = m.source.strata
    assert pulled.poly(key) == var("1.l3") + var("2.l3")


def test_dr_examples():
    for a in ([1, -1, 0], [2, 3, -5], [0, 0, 0, 0]):
        c = dr_polynomial(0, len(a), a)
        assert c == PPClass.constant(c.stack, 1)
    assert dr_polynomial(1, 2, [0, 0]).is_zero()
    c = dr_polynomial(1, 2, [1, -1])
    half = Fraction(-1, 2)
    for key in c.stack.strata:
        assert c.poly(key) == Polynomial.linear({"l1": half, "l2": half})
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        z = dr_polynomial(0, 3, [1, 1, 0])
    assert z.is_zero() and any(issubclass(w.category, NonZeroSumWarning) for w in caught)
    with pytest.raises(DegreeError):
        dr_polynomial(1, 2, [1, -1], L=PPClass.constant(build_moduli(1, 2), 1))


def test_dr_with_plugged_inputs():
    s = build_moduli(1, 2)
    L = boundary_class(s, edge_type_graph(1, 2, [1, 2], g_left=0))
    c = dr_polynomial(1, 2, [1, -1], L=L, P=PPClass.constant(s, 2))
    expected = (length_class(s, 1) + length_class(s, 2) + L).map(lambda p: -p)
    assert c == expected


def test_lift_from_unpointed():
    delta = edge_type_graph(0, 4, [1, 2])
    lifted = lift_to_pointed(boundary_class(build_moduli(0, 4, pointed=False), delta))
    assert lifted == boundary_class(build_moduli(0, 4), delta)


def test_json_round_trip():
    c = dr_polynomial(1, 2, [2, -2])
    assert PPClass.from_json(c.to_json()) == c


# ---------------------------------------------------------------------------
# star subdivision and phi


def _phi_on_one_two():
    s = build_moduli(1, 2)
    smooth = smooth_graph(1, 2).digest
    sd = star_subdivide_stack(s, smooth, {"l1": 1, "l2": 1})
    return sd, phi_class(sd)


def test_phi_class_validates_and_vanishes_off_ray():
    sd, phi = _phi_on_one_two()
    assert phi.validate().ok
    assert not phi.is_strict
    assert vanishing_off_ray(sd, phi) == []
    # on the smooth stratum phi = min(l1, l2)
    smooth = sd.base_key
    pw = phi.on(smooth)
    assert pw.evaluate({"l1": 3, "l2": 5}) == 3
    assert pw.evaluate({"l1": 7, "l2": 2}) == 2


def test_length_class_does_not_vanish_off_ray():
    sd, _ = _phi_on_one_two()
    assert vanishing_off_ray(sd, length_class(sd.stack, 1))


@pytest.mark.parametrize("m", [gluing_morphism(1, 0, 0, 2), loop_gluing_morphism(1, 2), forgetful_morphism(1, 2)])
def test_pullback_of_subdivided_class_validates(m):
    _, phi = _phi_on_one_two()
    pulled = pullback(m, phi)
    assert pulled.validate().ok


def test_subdivided_json_round_trip():
    _, phi = _phi_on_one_two()
    back = PPClass.from_json(phi.to_json())
    assert back == phi
    assert isinstance(back.on(next(iter(back.stack.strata))), Piecewise)


# ---------------------------------------------------------------------------
# pullback is a ring homomorphism and respects composition


def random_class(stack, coeffs):
    n = stack.n
    base = PPClass.zero(stack)
    for i in range(1, n + 1):
        base = base + length_class(stack, i).map(lambda p, c=coeffs[i % len(coeffs)]: p * c)
    delta = edge_type_graph(stack.g, n, [1, 2]) if n >= 4 or stack.g else None
    if delta is not None:
        base = base + boundary_class(stack, delta).map(lambda p, c=coeffs[0]: p * c)
    return base + coeffs[-1]


MORPHISMS = [gluing_morphism(0, 2, 0, 2), gluing_morphism(1, 0, 0, 3), forgetful_morphism(0, 4), loop_gluing_morphism(1, 2)]


@settings(max_examples=30, deadline=None)
@given(
    st.sampled_from(MORPHISMS),
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
)
def test_pullback_is_a_ring_homomorphism(m, ca, cb):
    x, y = random_class(m.target, ca), random_class(m.target, cb)
    assert pullback(m, x * y) == pullback(m, x) * pullback(m, y)
    assert pullback(m, x + y) == pullback(m, x) + pullback(m, y)


def test_pullback_respects_composition():
    glue = gluing_morphism(0, 2, 0, 3)
    forget = forgetful_morphism(0, 4)
    for c in (length_class(forget.target, 1), boundary_class(forget.target, edge_type_graph(0, 4, [1, 3]))):
        assert pullback(glue.compose(forget), c) == pullback(glue, pullback(forget, c))
