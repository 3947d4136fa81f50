"""Tropical moduli cone stacks and the coordinate maps between them.

A stratum is indexed by a canonical stable graph and carries the orthant with
one coordinate per edge (``e0``, ``e1``, ...) and, for pointed stacks, one per
leg (``l1`` ... ``ln``).  Faces come from contracting a single edge, and the
automorphism group acts by permuting edge labels.  Morphisms are recorded as
per-stratum scripts that express every target coordinate as a nonnegative
integer combination of source coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .cones import Cone
from .graphs import (
    GraphError,
    StableGraph,
    contract_edges,
    edge_automorphism_generators,
    edge_automorphisms,
    edge_label,
    enumerate_stable_graphs,
    forget_leg,
    glue_graphs,
    glue_loop,
    leg_label,
    automorphisms,
)

Script = Mapping[str, Mapping[str, int]]


class StackError(Exception):
    pass


class SignatureMismatch(StackError):
    pass


def canonical_labels(g: StableGraph) -> tuple[str, dict[str, str]]:
    """Digest of g and the map from g's coordinate labels to canonical ones."""
    c = g.canonical()
    relabel = {edge_label(k): edge_label(c.edge_map[k]) for k in range(g.num_edges)}
    relabel.update({leg_label(i): leg_label(i) for i in range(1, g.n + 1)})
    return c.digest, relabel


@dataclass(frozen=True)
class Face:
    """The facet ``label = 0`` of a stratum, identified with another stratum.

    ``relabel`` sends every surviving coordinate label of the stratum to the
    corresponding label of the face stratum.
    """

    label: str
    key: str
    relabel: Mapping[str, str]


@dataclass(frozen=True)
class Stratum:
    key: str
    graph: object  # StableGraph, or a pair of them for product stacks
    labels: tuple[str, ...]
    faces: tuple[Face, ...]
    aut_generators: tuple[tuple[tuple[str, str], ...], ...]
    aut_perms: tuple[tuple[tuple[str, str], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def edge_labels(self) -> tuple[str, ...]:
        return tuple(x for x in self.labels if x.rsplit(".", 1)[-1].startswith("e"))

    @property
    def leg_labels(self) -> tuple[str, ...]:
        return tuple(x for x in self.labels if x.rsplit(".", 1)[-1].startswith("l"))

    def cone(self) -> Cone:
        return Cone.orthant(self.dim)

    def face(self, label: str) -> Face:
        return next(f for f in self.faces if f.label == label)

    def automorphisms(self, generators_only: bool = False) -> list[dict[str, str]]:
        src = self.aut_generators if generators_only else self.aut_perms
        return [dict(p) for p in src]


def _label_perm(edge_perm: Sequence[int], extra: Iterable[str]) -> tuple[tuple[str, str], ...]:
    pairs = [(edge_label(k), edge_label(t)) for k, t in enumerate(edge_perm)]
    pairs += [(x, x) for x in extra]
    return tuple(sorted(pairs))


class ConeStack:
    """Common interface: an ordered mapping of strata keyed by string."""

    strata: dict[str, Stratum]

    def __iter__(self):
        return iter(self.strata.values())

    def __len__(self):
        return len(self.strata)

    def __getitem__(self, key: str) -> Stratum:
        return self.strata[key]

    @property
    def signature(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, ConeStack) and self.signature == other.signature

    def __hash__(self):
        return hash(self.signature)

    def key_of(self, graph) -> str:
        raise NotImplementedError


class ModuliConeStack(ConeStack):
    def __init__(self, g: int, n: int, pointed: bool = True):
        self.g, self.n, self.pointed = g, n, pointed
        self.strata = {}
        for graph, _ in enumerate_stable_graphs(g, n):
            self.strata[graph.digest] = self._stratum(graph)

    def _stratum(self, graph: StableGraph) -> Stratum:
        legs = [leg_label(i) for i in range(1, self.n + 1)] if self.pointed else []
        labels = tuple(edge_label(k) for k in range(graph.num_edges)) + tuple(legs)
        faces = []
        for k in range(graph.num_edges):
            h, corr = contract_edges(graph, [k])
            key, relabel = canonical_labels(h)
            rl = {edge_label(j): relabel[edge_label(corr.edges[j])] for j in corr.edges}
            rl.update({x: x for x in legs})
            faces.append(Face(edge_label(k), key, rl))
        gens = tuple(_label_perm(p, legs) for p in edge_automorphism_generators(graph))
        perms = tuple(_label_perm(p, legs) for p in edge_automorphisms(graph))
        return Stratum(graph.digest, graph, labels, tuple(faces), gens, perms)

    @property
    def signature(self):
        return ("M", self.g, self.n, self.pointed)

    def key_of(self, graph: StableGraph) -> str:
        return graph.digest

    def unpointed(self) -> "ModuliConeStack":
        return build_moduli(self.g, self.n, False)

    def declared_symmetries(self, key: str) -> list[dict[str, str]]:
        """Label permutations from automorphisms that may also permute legs."""
        s = self.strata[key]
        graph = s.graph
        out = []
        for vperm, legperm in automorphisms(graph, fix_legs=False):
            parallel: dict[tuple[int, int], list[int]] = {}
            for k, e in enumerate(graph.edges):
                parallel.setdefault(e, []).append(k)
            perm = {}
            for e, ks in parallel.items():
                u, v = vperm[e[0]], vperm[e[1]]
                for k, t in zip(ks, parallel[(min(u, v), max(u, v))]):
                    perm[edge_label(k)] = edge_label(t)
            if self.pointed:
                for i, j in enumerate(legperm):
                    perm[leg_label(i + 1)] = leg_label(j + 1)
            out.append(perm)
        return out

    def __repr__(self):
        kind = "pointed" if self.pointed else "unpointed"
        return f"ModuliConeStack(g={self.g}, n={self.n}, {kind}, strata={len(self.strata)})"


@lru_cache(maxsize=None)
def build_moduli(g: int, n: int, pointed: bool = True) -> ModuliConeStack:
    return ModuliConeStack(g, n, pointed)


class ProductStack(ConeStack):
    """Product of two cone stacks; labels are prefixed ``1.`` and ``2.``."""

    def __init__(self, first: ConeStack, second: ConeStack):
        self.first, self.second = first, second
        self.strata = {}
        for a in first:
            for b in second:
                key = f"{a.key}|{b.key}"
                labels = tuple("1." + x for x in a.labels) + tuple("2." + x for x in b.labels)
                faces = []
                for f in a.faces:
                    rl = {"1." + s: "1." + t for s, t in f.relabel.items()}
                    rl.update({"2." + x: "2." + x for x in b.labels})
                    faces.append(Face("1." + f.label, f"{f.key}|{b.key}", rl))
                for f in b.faces:
                    rl = {"1." + x: "1." + x for x in a.labels}
                    rl.update({"2." + s: "2." + t for s, t in f.relabel.items()})
                    faces.append(Face("2." + f.label, f"{a.key}|{f.key}", rl))
                gens = [tuple(sorted([("1." + s, "1." + t) for s, t in p] + [("2." + x, "2." + x) for x in b.labels])) for p in a.aut_generators]
                gens += [tuple(sorted([("1." + x, "1." + x) for x in a.labels] + [("2." + s, "2." + t) for s, t in p])) for p in b.aut_generators]
                perms = [
                    tuple(sorted([("1." + s, "1." + t) for s, t in p] + [("2." + s, "2." + t) for s, t in q]))
                    for p in a.aut_perms
                    for q in b.aut_perms
                ]
                self.strata[key] = Stratum(key, (a.graph, b.graph), labels, tuple(faces), tuple(gens), tuple(perms))

    @property
    def signature(self):
        return ("x", self.first.signature, self.second.signature)

    def key_of(self, graph) -> str:
        return f"{self.first.key_of(graph[0])}|{self.second.key_of(graph[1])}"

    def __repr__(self):
        return f"ProductStack({self.first!r}, {self.second!r})"


@lru_cache(maxsize=None)
def product_stack(first: ConeStack, second: ConeStack) -> ProductStack:
    return ProductStack(first, second)


# ---------------------------------------------------------------------------
# morphisms


def compose_scripts(outer: Script, inner: Script) -> dict[str, dict[str, int]]:
    """outer ∘ inner: outer's sources are inner's targets."""
    out = {}
    for t, src in outer.items():
        acc: dict[str, int] = {}
        for mid, c in src.items():
            for s, c2 in inner[mid].items():
                acc[s] = acc.get(s, 0) + c * c2
        out[t] = {s: c for s, c in sorted(acc.items()) if c}
    return out


def apply_script(script: Script, point: Mapping[str, int]) -> dict[str, int]:
    return {t: sum(c * point.get(s, 0) for s, c in src.items()) for t, src in script.items()}


@dataclass
class StackMorphism:
    source: ConeStack
    target: ConeStack
    mapping: dict[str, tuple[str, dict[str, dict[str, int]]]]
    name: str = ""

    def image(self, key: str) -> str:
        return self.mapping[key][0]

    def script(self, key: str) -> dict[str, dict[str, int]]:
        return self.mapping[key][1]

    def matrix(self, key: str) -> list[list[int]]:
        """Script as an integer matrix: rows target labels, columns source labels."""
        tkey, script = self.mapping[key]
        src = self.source[key].labels
        return [[script[t].get(s, 0) for s in src] for t in self.target[tkey].labels]

    def compose(self, after: "StackMorphism") -> "StackMorphism":
        """The morphism ``after ∘ self``."""
        if after.source != self.target:
            raise SignatureMismatch("morphisms are not composable")
        mapping = {}
        for key, (mid, inner) in self.mapping.items():
            tkey, outer = after.mapping[mid]
            mapping[key] = (tkey, compose_scripts(outer, inner))
        return StackMorphism(self.source, after.target, mapping, f"{after.name}∘{self.name}")

    def problems(self) -> list[str]:
        """Violations of integrality, nonnegativity and face compatibility."""
        out = []
        for key, (tkey, script) in self.mapping.items():
            tgt = self.target[tkey]
            if set(script) != set(tgt.labels):
                out.append(f"{key}: script does not cover the target coordinates")
            for t, src in script.items():
                if any(not isinstance(c, int) or c < 0 for c in src.values()):
                    out.append(f"{key}: coefficient of {t} is not a nonnegative integer")
            for face in self.source[key].faces:
                msg = self._face_problem(key, face)
                if msg:
                    out.append(msg)
        return out

    def _face_problem(self, key: str, face: Face) -> str | None:
        tkey, script = self.mapping[key]
        tgt = self.target[tkey]
        restricted = {t: {s: c for s, c in src.items() if s != face.label} for t, src in script.items()}
        dead = [t for t in tgt.labels if not restricted[t]]
        if any(t not in tgt.edge_labels for t in dead):
            return f"{key}: face {face.label} kills a leg coordinate"
        h, corr = contract_edges(tgt.graph, [int(t[1:]) for t in dead])
        hkey, relabel = canonical_labels(h)
        fkey, fscript = self.mapping[face.key]
        if hkey != fkey:
            return f"{key}: face {face.label} maps to {hkey[:12]} but its stratum maps to {fkey[:12]}"
        moved = {}
        for t, src in restricted.items():
            if t in dead:
                continue
            new_t = relabel[edge_label(corr.edges[int(t[1:])])] if t.startswith("e") else t
            moved[new_t] = {face.relabel[s]: c for s, c in src.items()}
        for perm in self.target[fkey].automorphisms():
            if all(fscript[perm[t]] == src for t, src in moved.items()):
                return None
        return f"{key}: scripts disagree on face {face.label}"


def _glue_leg_order(n1: int, n2: int, first_legs: Sequence[int] | None) -> list[int]:
    """Target marking for each leg of the glued graph (first factor, then second)."""
    n = n1 + n2
    if first_legs is None:
        return list(range(1, n + 1))
    first = sorted(first_legs)
    if len(first) != n1 or not set(first) <= set(range(1, n + 1)):
        raise SignatureMismatch(f"{first_legs} is not an {n1}-subset of 1..{n}")
    rest = [i for i in range(1, n + 1) if i not in first]
    return first + rest


def _renumber_legs(g: StableGraph, order: Sequence[int]) -> StableGraph:
    legs = [0] * g.n
    for i, target in enumerate(order):
        legs[target - 1] = g.legs[i]
    return StableGraph(g.genera, g.edges, tuple(legs))


def gluing_morphism(g1: int, n1: int, g2: int, n2: int, first_legs: Sequence[int] | None = None) -> StackMorphism:
    """Glue leg n1+1 of a (g1, n1+1) curve to leg n2+1 of a (g2, n2+1) curve.

    The glued edge gets length ``l_p + l_q``; other coordinates are carried
    over.  ``first_legs`` chooses which target markings the first factor's
    remaining legs become (default 1..n1).
    """
    try:
        src = product_stack(build_moduli(g1, n1 + 1), build_moduli(g2, n2 + 1))
        tgt = build_moduli(g1 + g2, n1 + n2)
    except GraphError as exc:
        raise SignatureMismatch(str(exc)) from exc
    order = _glue_leg_order(n1, n2, first_legs)
    p, q = n1 + 1, n2 + 1
    mapping = {}
    for s in src:
        a, b = s.graph
        glued, c1, c2 = glue_graphs(a, p, b, q)
        glued = _renumber_legs(glued, order)
        key, relabel = canonical_labels(glued)
        script = {}
        for k, t in c1.edges.items():
            script[relabel[edge_label(t)]] = {"1." + edge_label(k): 1}
        for k, t in c2.edges.items():
            script[relabel[edge_label(t)]] = {"2." + edge_label(k): 1}
        script[relabel[edge_label(c1.new_edge)]] = {"1." + leg_label(p): 1, "2." + leg_label(q): 1}
        for i, t in c1.legs.items():
            script[leg_label(order[t - 1])] = {"1." + leg_label(i): 1}
        for i, t in c2.legs.items():
            script[leg_label(order[t - 1])] = {"2." + leg_label(i): 1}
        mapping[s.key] = (key, script)
    name = f"glue:{g1},{n1},{g2},{n2}" + (f"[{','.join(map(str, sorted(first_legs)))}]" if first_legs else "")
    return StackMorphism(src, tgt, mapping, name)


def loop_gluing_morphism(g: int, n: int) -> StackMorphism:
    """Glue legs n+1 and n+2 of a (g-1, n+2) curve into a non-separating edge."""
    if g < 1:
        raise SignatureMismatch("loop gluing needs g >= 1")
    src = build_moduli(g - 1, n + 2)
    tgt = build_moduli(g, n)
    mapping = {}
    for s in src:
        glued, corr = glue_loop(s.graph, n + 1, n + 2)
        key, relabel = canonical_labels(glued)
        script = {relabel[edge_label(t)]: {edge_label(k): 1} for k, t in corr.edges.items()}
        script[relabel[edge_label(corr.new_edge)]] = {leg_label(n + 1): 1, leg_label(n + 2): 1}
        for i, t in corr.legs.items():
            script[leg_label(t)] = {leg_label(i): 1}
        mapping[s.key] = (key, script)
    return StackMorphism(src, tgt, mapping, f"loop:{g},{n}")


def forgetful_morphism(g: int, n: int) -> StackMorphism:
    """Forget the last leg: (g, n+1) -> (g, n)."""
    src = build_moduli(g, n + 1)
    tgt = build_moduli(g, n)
    mapping = {}
    for s in src:
        h, script = forget_leg(s.graph, n + 1)
        key, relabel = canonical_labels(h)
        mapping[s.key] = (key, {relabel[t]: dict(src_) for t, src_ in script.items()})
    return StackMorphism(src, tgt, mapping, f"forget:{g},{n}")


def leg_permutation_morphism(g: int, n: int, perm: Sequence[int]) -> StackMorphism:
    """Relabel markings: leg i of the source becomes leg ``perm[i-1]`` of the target."""
    if sorted(perm) != list(range(1, n + 1)):
        raise SignatureMismatch(f"{perm} is not a permutation of 1..{n}")
    stack = build_moduli(g, n)
    mapping = {}
    for s in stack:
        h = _renumber_legs(s.graph, perm)
        key, relabel = canonical_labels(h)
        script = {relabel[edge_label(k)]: {edge_label(k): 1} for k in range(s.graph.num_edges)}
        for i in range(1, n + 1):
            script[leg_label(perm[i - 1])] = {leg_label(i): 1}
        mapping[s.key] = (key, script)
    return StackMorphism(stack, stack, mapping, f"perm:{g},{n}:{','.join(map(str, perm))}")


def parse_morphism(text: str) -> StackMorphism:
    """Parse ``glue:g1,n1,g2,n2``, ``loop:g,n``, ``forget:g,n`` or ``perm:g,n:p1,...``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "perm":
            sig, _, perm = rest.partition(":")
            g, n = (int(x) for x in sig.split(","))
            return leg_permutation_morphism(g, n, [int(x) for x in perm.split(",")])
        nums = [int(x) for x in rest.split(",")]
    except ValueError as exc:
        raise SignatureMismatch(f"cannot parse morphism {text!r}") from exc
    if kind == "glue" and len(nums) == 4:
        return gluing_morphism(*nums)
    if kind == "loop" and len(nums) == 2:
        return loop_gluing_morphism(*nums)
    if kind == "forget" and len(nums) == 2:
        return forgetful_morphism(*nums)
    raise SignatureMismatch(f"cannot parse morphism {text!r}")


def stack_to_json(stack: ModuliConeStack) -> dict:
    strata = []
    for s in stack:
        strata.append(
            {
                "graph_digest": s.key,
                "graph": s.graph.to_json(),
                "labels": list(s.labels),
                "faces": [{"coordinate": f.label, "stratum": f.key, "relabel": dict(sorted(f.relabel.items()))} for f in s.faces],
                "automorphisms": [dict(p) for p in s.aut_generators],
                "aut_order": s.graph.canonical().aut_order,
            }
        )
    return {"g": stack.g, "n": stack.n, "pointed": stack.pointed, "strata": strata}
