from __future__ import annotations

import pytest

from logtrop.cones import Cone
from logtrop.graphs import UnstableSignature, edge_label
from logtrop.moduli import (
    SignatureMismatch,
    build_moduli,
    forgetful_morphism,
    gluing_morphism,
    leg_permutation_morphism,
    loop_gluing_morphism,
    parse_morphism,
    product_stack,
    stack_to_json,
)


def test_zero_three():
    s = build_moduli(0, 3)
    assert len(s.strata) == 1
    (st,) = list(s)
    assert st.labels == ("l1", "l2", "l3")
    assert st.cone() == Cone.orthant(3)


def test_one_one():
    s = build_moduli(1, 1)
    assert sorted(st.dim for st in s) == [1, 2]
    loop = next(st for st in s if st.dim == 2)
    assert loop.labels == ("e0", "l1")
    # the half-edge flip of the loop fixes every coordinate
    assert loop.automorphisms() == [{"e0": "e0", "l1": "l1"}]


def test_unpointed_zero_four():
    assert sorted(st.dim for st in build_moduli(0, 4, pointed=False)) == [0, 1, 1, 1]
    with pytest.raises(UnstableSignature):
        build_moduli(0, 2)


@pytest.mark.parametrize("g,n", [(0, 4), (0, 5), (1, 2), (1, 3), (2, 1)])
def test_pointed_is_unpointed_plus_legs(g, n):
    pointed, unpointed = build_moduli(g, n), build_moduli(g, n, pointed=False)
    assert set(pointed.strata) == set(unpointed.strata)
    legs = tuple(f"l{i}" for i in range(1, n + 1))
    for key, st in pointed.strata.items():
        bare = unpointed[key]
        assert st.labels == bare.labels + legs
        assert all(lab.startswith("e") for lab in bare.labels)
        for face in st.faces:
            twin = next(f for f in bare.faces if f.label == face.label)
            assert twin.key == face.key
            assert {k: v for k, v in face.relabel.items() if k.startswith("e")} == dict(twin.relabel)
        for perm in st.automorphisms():
            assert all(perm[x] == x for x in legs)


def test_face_maps_contract_the_edge():
    s = build_moduli(0, 5)
    for st in s:
        for face in st.faces:
            assert s[face.key].dim == st.dim - 1


def test_gluing_script():
    m = gluing_morphism(0, 2, 0, 2)
    assert len(m.source.strata) == 1
    ((key, (target, script)),) = m.mapping.items()
    assert script[edge_label(0)] == {"1.l3": 1, "2.l3": 1}
    assert script["l3"] == {"2.l1": 1} and script["l4"] == {"2.l2": 1}
    assert m.target[target].dim == 5


def test_loop_script():
    m = loop_gluing_morphism(1, 1)
    ((_, (target, script)),) = m.mapping.items()
    assert script["e0"] == {"l2": 1, "l3": 1}
    assert m.target[target].labels == ("e0", "l1")


def test_forgetful_tail_and_identity_scripts():
    m = forgetful_morphism(0, 3)
    scripts = [script for _, script in m.mapping.values()]
    assert {"l1": {"l1": 1}, "l2": {"l2": 1}, "l3": {"l3": 1}} in scripts
    assert any(s["l3"] == {"l3": 1, "e0": 1} for s in scripts)


def test_forgetful_bridge_rule():
    m = forgetful_morphism(1, 1)
    bridge = [s for _, s in m.mapping.values() if any(len(v) == 2 and all(k.startswith("e") for k in v) for v in s.values())]
    assert bridge


MORPHISMS = [
    ("glue", (0, 2, 0, 2)),
    ("glue", (1, 0, 0, 2)),
    ("glue", (0, 2, 0, 3)),
    ("glue", (1, 1, 0, 2)),
    ("glue", (1, 0, 1, 1)),
    ("loop", (1, 1)),
    ("loop", (1, 2)),
    ("loop", (2, 0)),
    ("forget", (0, 4)),
    ("forget", (1, 2)),
    ("forget", (1, 1)),
]


@pytest.mark.parametrize("kind,args", MORPHISMS)
def test_scripts_commute_with_faces(kind, args):
    m = {"glue": gluing_morphism, "loop": loop_gluing_morphism, "forget": forgetful_morphism}[kind](*args)
    assert m.problems() == []
    for _, script in m.mapping.values():
        for src in script.values():
            assert all(isinstance(c, int) and c > 0 for c in src.values())


def test_gluing_with_other_leg_subsets():
    m = gluing_morphism(0, 2, 0, 2, first_legs=[1, 3])
    assert m.problems() == []
    ((_, (_, script)),) = m.mapping.items()
    assert script["l3"] == {"1.l2": 1} and script["l2"] == {"2.l1": 1}


def test_composition_and_permutations():
    glue = gluing_morphism(0, 2, 0, 3)
    forget = forgetful_morphism(0, 4)
    composed = glue.compose(forget)
    assert composed.source == glue.source and composed.target == forget.target
    assert composed.problems() == []
    swap = leg_permutation_morphism(0, 4, [2, 1, 3, 4])
    assert swap.compose(swap).problems() == []
    for key, (target, script) in swap.compose(swap).mapping.items():
        assert target == key
        assert all(src == {lab: 1} for lab, src in script.items())


def test_parse_morphism():
    assert parse_morphism("glue:0,2,0,2").name == gluing_morphism(0, 2, 0, 2).name
    assert parse_morphism("loop:1,1").target == build_moduli(1, 1)
    assert parse_morphism("forget:0,3").source == build_moduli(0, 4)
    with pytest.raises(SignatureMismatch):
        parse_morphism("twist:1")


def test_product_and_json():
    p = product_stack(build_moduli(0, 3), build_moduli(1, 1))
    assert len(p.strata) == 2
    assert all("|" in key for key in p.strata)
    data = stack_to_json(build_moduli(1, 2))
    assert len(data["strata"]) == 5
    assert sum(1 for s in data["strata"] if s["faces"]) == 4
