from __future__ import annotations

import random

import pytest

from logtrop.cones import Cone, ConeComplex, NotSimplicial, star_subdivision
from logtrop.fanchow import (
    FanPP,
    NotARefinementChain,
    NotComplete,
    NotSmooth,
    chow_ring,
    line_fan,
    logch_probe,
    orthant_fan,
    polygon_fan,
    pp_dimensions,
    stanley_reisner_count,
)

from oracles import face_ring_count, h_vector


def ray_tuples(fan: ConeComplex):
    index = {r: j for j, r in enumerate(sorted(fan.rays))}
    return [tuple(index[r] for r in c.rays) for c in fan.maximal]


P2 = [(1, 0), (0, 1), (-1, -1)]
SQUARE = [(1, 0), (0, 1), (-1, 0), (0, -1)]
OCTAHEDRAL = ConeComplex.from_rays(
    [[(sx, 0, 0), (0, sy, 0), (0, 0, sz)] for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)], 3
)


def test_pp_dimension_examples():
    assert pp_dimensions(orthant_fan(3), 3) == [1, 3, 6, 10]
    assert pp_dimensions(line_fan(), 2) == [1, 2, 2]
    assert pp_dimensions(polygon_fan(P2), 2) == [1, 3, 6]


def random_star_chain(rnd, fan, steps):
    for _ in range(steps):
        c = rnd.choice(fan.maximal)
        face = rnd.sample(c.rays, rnd.randint(2, len(c.rays)))
        fan = star_subdivision(fan, tuple(sum(x) for x in zip(*face))).refined
    return fan


@pytest.mark.parametrize("seed", range(8))
def test_pp_dimension_is_face_ring_count(seed):
    rnd = random.Random(seed)
    base = rnd.choice([orthant_fan(2), orthant_fan(3), polygon_fan(P2)])
    fan = random_star_chain(rnd, base, rnd.randint(0, 3))
    for d in range(3):
        expected = face_ring_count(ray_tuples(fan), d)
        assert stanley_reisner_count(fan, d) == expected
        assert FanPP(fan).dimension(d) == expected


@pytest.mark.parametrize(
    "fan,expected",
    [
        (line_fan(), [1, 1]),
        (polygon_fan(P2), [1, 1, 1]),
        (polygon_fan(SQUARE), [1, 2, 1]),
        (polygon_fan([(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)]), [1, 3, 1]),
        (OCTAHEDRAL, [1, 3, 3, 1]),
    ],
)
def test_chow_dimensions_match_h_vector(fan, expected):
    ring = chow_ring(fan)
    assert ring.dimensions == expected == h_vector(ray_tuples(fan), fan.ambient)


def test_line_chow_ring():
    ring = chow_ring(line_fan())
    assert ring.dimensions == [1, 1]
    assert ring.product_is_zero(1, 0, 1, 0)
    assert ring.product(0, 0, 1, 0) != [0]


@pytest.mark.parametrize("seed", range(5))
def test_poincare_duality_on_random_blowups(seed):
    rnd = random.Random(seed)
    fan = random_star_chain(rnd, polygon_fan(P2), rnd.randint(1, 3))
    ring = chow_ring(fan)
    h = h_vector(ray_tuples(fan), 2)
    assert ring.dimensions == h and h[1] == len(fan.rays) - 2
    # the degree-1 pairing into the top degree is perfect
    from logtrop.linalg import rank

    gram = [[ring.product(1, a, 1, b)[0] for b in range(h[1])] for a in range(h[1])]
    assert rank(gram) == h[1]


def test_chow_errors():
    with pytest.raises(NotComplete):
        chow_ring(orthant_fan(2))
    with pytest.raises(NotSmooth):
        chow_ring(polygon_fan([(1, 0), (1, 2), (-1, 0), (0, -1)]))
    with pytest.raises(NotSimplicial):
        FanPP(ConeComplex([Cone([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])]))


def test_probe_grows_along_star_chain():
    chain = [(1, 1), (2, 1), (3, 1), (4, 1)]
    report = logch_probe(Cone.orthant(2), chain)
    assert [s.dimensions[1] for s in report.steps] == [2, 3, 4, 5, 6]
    assert all(all(s.injective) for s in report.steps[1:])
    assert report.note
    report3 = logch_probe(Cone.orthant(3), [(1, 1, 1), (1, 1, 0), (2, 1, 1), (1, 2, 1)])
    assert [s.dimensions[1] for s in report3.steps] == [3, 4, 5, 6, 7]
    assert report3.to_json()["steps"][1]["transition_injective"] == [True, True, True]


def test_probe_rejects_non_refinements():
    other = ConeComplex([Cone([(1, 0), (1, 1)]), Cone([(1, 1), (-1, 1)])])
    with pytest.raises(NotARefinementChain):
        logch_probe(Cone.orthant(2), [other])
