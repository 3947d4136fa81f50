"""Stable genus-decorated dual graphs with ordered legs.

A :class:`StableGraph` stores vertex genera, an edge list of vertex pairs and,
for each marking ``i = 1..n``, the vertex carrying leg ``i``.  The half-edge
description (``H``, incidence ``r``, involution ``i``) is derived on demand:
edge ``k`` owns half-edges ``2k`` and ``2k+1`` and leg ``i`` is the fixed
half-edge ``2E + i - 1``.

Canonical forms minimise over vertex orders compatible with a colour
refinement, so legs (which are never permuted) pin down most vertices.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

DEFAULT_MAX_VERTICES = 12
DEFAULT_MAX_EDGES = 14


class GraphError(Exception):
    """Base class for graph construction and surgery errors."""


@dataclass(frozen=True)
class GraphIssue:
    code: str
    detail: str = ""

    def __str__(self):
        return f"{self.code}: {self.detail}" if self.detail else self.code


class InvalidGraph(GraphError):
    def __init__(self, issues: Sequence[GraphIssue]):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))

    @property
    def codes(self) -> list[str]:
        return [i.code for i in self.issues]


class UnstableSignature(GraphError):
    pass


class ResourceBound(GraphError):
    pass


class NotALeg(GraphError):
    pass


class SameLeg(GraphError):
    pass


class ResultUnstable(GraphError):
    pass


@dataclass(frozen=True)
class StableGraph:
    genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    legs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "genera", tuple(int(x) for x in self.genera))
        object.__setattr__(self, "edges", tuple((min(u, v), max(u, v)) for u, v in self.edges))
        object.__setattr__(self, "legs", tuple(int(x) for x in self.legs))

    # basic invariants
    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def n(self) -> int:
        return len(self.legs)

    @property
    def h1(self) -> int:
        return self.num_edges - self.num_vertices + 1

    @property
    def genus(self) -> int:
        return sum(self.genera) + self.h1

    def valence(self, v: int) -> int:
        val = sum(1 for x in self.legs if x == v)
        for a, b in self.edges:
            val += (a == v) + (b == v)
        return val

    def legs_at(self, v: int) -> tuple[int, ...]:
        """Markings (1-based) carried by vertex v."""
        return tuple(i + 1 for i, x in enumerate(self.legs) if x == v)

    def is_loop(self, k: int) -> bool:
        u, v = self.edges[k]
        return u == v

    # half-edge model
    @property
    def half_edges(self) -> tuple[int, ...]:
        return tuple(range(2 * self.num_edges + self.n))

    @property
    def incidence(self) -> dict[int, int]:
        r = {}
        for k, (u, v) in enumerate(self.edges):
            r[2 * k], r[2 * k + 1] = u, v
        for i, v in enumerate(self.legs):
            r[2 * self.num_edges + i] = v
        return r

    @property
    def involution(self) -> dict[int, int]:
        inv = {}
        for k in range(self.num_edges):
            inv[2 * k], inv[2 * k + 1] = 2 * k + 1, 2 * k
        for i in range(self.n):
            h = 2 * self.num_edges + i
            inv[h] = h
        return inv

    @property
    def leg_half_edges(self) -> tuple[int, ...]:
        return tuple(2 * self.num_edges + i for i in range(self.n))

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        adj = {v: set() for v in range(self.num_vertices)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen, todo = {0}, [0]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.num_vertices

    def is_stable(self) -> bool:
        return all(2 * g - 2 + self.valence(v) > 0 for v, g in enumerate(self.genera))

    # canonical data
    @cached_property
    def _canon(self):
        return _canonicalize(self)

    def canonical(self) -> "Canonical":
        return self._canon

    def is_canonical(self) -> bool:
        return self._canon.graph == self

    @property
    def digest(self) -> str:
        return self._canon.digest

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "vertices": [{"id": v, "genus": g} for v, g in enumerate(self.genera)],
            "edges": [[u, v] for u, v in self.edges],
            "legs": list(self.legs),
        }

    def canonical_bytes(self) -> bytes:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")).encode()

    def __str__(self):
        parts = []
        for v, g in enumerate(self.genera):
            parts.append(f"v{v}(g={g}, legs={list(self.legs_at(v))})")
        return f"G[{self.genus},{self.n}]: " + ", ".join(parts) + f"; edges={list(self.edges)}"


@dataclass(frozen=True)
class Canonical:
    """Canonical representative plus the relabelling that reaches it."""

    graph: StableGraph
    vertex_map: tuple[int, ...]  # old vertex -> canonical vertex
    edge_map: tuple[int, ...]  # old edge -> canonical edge
    vertex_automorphisms: tuple[tuple[int, ...], ...]  # of the canonical graph
    digest: str = field(default="")

    @property
    def aut_order(self) -> int:
        return automorphism_order(self.graph, len(self.vertex_automorphisms))


def automorphism_order(g: StableGraph, vertex_auts: int) -> int:
    order = vertex_auts
    for (u, v), m in Counter(g.edges).items():
        order *= factorial(m)
        if u == v:
            order *= 2 ** m
    return order


# ---------------------------------------------------------------------------
# validation


def graph_issues(g: StableGraph, declared_genus: int | None = None, declared_n: int | None = None) -> list[GraphIssue]:
    issues = []
    nv = g.num_vertices
    if nv == 0:
        return [GraphIssue("NotConnected", "no vertices")]
    for u, v in g.edges:
        if not (0 <= u < nv and 0 <= v < nv):
            issues.append(GraphIssue("BadInvolution", f"edge ({u},{v}) references a missing vertex"))
    for i, v in enumerate(g.legs):
        if not 0 <= v < nv:
            issues.append(GraphIssue("BadInvolution", f"leg {i + 1} references a missing vertex"))
    if issues:
        return issues
    if any(x < 0 for x in g.genera):
        issues.append(GraphIssue("GenusMismatch", "negative vertex genus"))
    if not g.is_connected():
        issues.append(GraphIssue("NotConnected"))
    for v, gv in enumerate(g.genera):
        if 2 * gv - 2 + g.valence(v) <= 0:
            issues.append(GraphIssue("UnstableVertex", f"vertex {v}: 2*{gv}-2+{g.valence(v)} <= 0"))
    if declared_genus is not None and g.genus != declared_genus:
        issues.append(GraphIssue("GenusMismatch", f"total genus {g.genus} != declared {declared_genus}"))
    if declared_n is not None and g.n != declared_n:
        issues.append(GraphIssue("LegCountMismatch", f"{g.n} legs != declared {declared_n}"))
    return issues


def _from_half_edges(raw: Mapping) -> tuple[StableGraph | None, list[GraphIssue]]:
    vids = [v["id"] if isinstance(v, Mapping) else v for v in raw["vertices"]]
    gens = [v.get("genus", 0) if isinstance(v, Mapping) else 0 for v in raw["vertices"]]
    index = {vid: k for k, vid in enumerate(vids)}
    r = {h: raw["r"][h] for h in raw["r"]}
    inv = dict(raw["i"])
    legs = list(raw.get("legs", []))
    issues = []
    halves = list(raw.get("half_edges", r.keys()))
    for h in halves:
        if h not in inv or inv[h] not in inv or inv[inv[h]] != h:
            issues.append(GraphIssue("BadInvolution", f"i(i({h})) != {h}"))
        if r.get(h) not in index:
            issues.append(GraphIssue("BadInvolution", f"half-edge {h} has no incident vertex"))
    fixed = [h for h in halves if inv.get(h) == h]
    if sorted(map(str, fixed)) != sorted(map(str, legs)):
        issues.append(GraphIssue("BadInvolution", "fixed points of i differ from the leg list"))
    if issues:
        return None, issues
    edges, seen = [], set()
    for h in halves:
        if inv[h] != h and h not in seen:
            seen.update((h, inv[h]))
            edges.append((index[r[h]], index[r[inv[h]]]))
    return StableGraph(tuple(gens), tuple(edges), tuple(index[r[h]] for h in legs)), []


def validate_graph(raw: Mapping | StableGraph) -> StableGraph:
    """Build a StableGraph from raw data, raising :class:`InvalidGraph` listing every violation.

    Accepts either a :class:`StableGraph`, the JSON schema
    ``{"genus", "vertices": [{"id", "genus"}], "edges": [[u, v]], "legs": [v...]}``
    or a half-edge form with keys ``half_edges``, ``r``, ``i`` and ``legs``.
    """
    declared_genus = declared_n = None
    if isinstance(raw, StableGraph):
        g = raw
    else:
        declared_genus = raw.get("genus")
        declared_n = raw.get("n")
        if "i" in raw:
            g, issues = _from_half_edges(raw)
            if issues:
                raise InvalidGraph(issues)
        else:
            vids = [v["id"] if isinstance(v, Mapping) else v for v in raw["vertices"]]
            gens = [v.get("genus", 0) if isinstance(v, Mapping) else 0 for v in raw["vertices"]]
            index = {vid: k for k, vid in enumerate(vids)}
            try:
                edges = tuple((index[u], index[v]) for u, v in raw.get("edges", []))
                legs = tuple(index[v] for v in raw.get("legs", []))
            except KeyError as exc:
                raise InvalidGraph([GraphIssue("BadInvolution", f"unknown vertex id {exc.args[0]!r}")])
            g = StableGraph(tuple(gens), edges, legs)
    issues = graph_issues(g, declared_genus, declared_n)
    if issues:
        raise InvalidGraph(issues)
    return g


def graph_from_json(data: Mapping) -> StableGraph:
    return validate_graph(data)


# ---------------------------------------------------------------------------
# canonical forms


def _refined_colours(g: StableGraph) -> list[tuple]:
    """Colour refinement; colours are canonical nested tuples."""
    nv = g.num_vertices
    loops = Counter(u for u, v in g.edges if u == v)
    col = [(g.legs_at(v), g.genera[v], g.valence(v), loops[v]) for v in range(nv)]
    nbrs = [[] for _ in range(nv)]
    for u, v in g.edges:
        if u != v:
            nbrs[u].append(v)
            nbrs[v].append(u)
    while True:
        rank = {c: k for k, c in enumerate(sorted(set(col)))}
        new = [(rank[col[v]], tuple(sorted(rank[col[w]] for w in nbrs[v]))) for v in range(nv)]
        if len(set(new)) == len(set(col)):
            return [rank[c] for c in col]
        col = new


def _relabel_key(g: StableGraph, perm: Sequence[int]):
    gens = [0] * len(perm)
    for v, pv in enumerate(perm):
        gens[pv] = g.genera[v]
    legs = tuple(perm[v] for v in g.legs)
    edges = tuple(sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges))
    return (tuple(gens), legs, edges)


def _candidate_perms(g: StableGraph):
    colours = _refined_colours(g)
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(colours):
        classes.setdefault(c, []).append(v)
    order = sorted(classes)
    slots = []
    start = 0
    for c in order:
        members = classes[c]
        slots.append((members, list(range(start, start + len(members)))))
        start += len(members)
    for choice in itertools.product(*(itertools.permutations(s) for _, s in slots)):
        perm = [0] * g.num_vertices
        for (members, _), targets in zip(slots, choice):
            for v, t in zip(members, targets):
                perm[v] = t
        yield tuple(perm)


def _canonicalize(g: StableGraph) -> Canonical:
    best = None
    best_perm = None
    for perm in _candidate_perms(g):
        key = _relabel_key(g, perm)
        if best is None or key < best:
            best, best_perm = key, perm
    gens, legs, edges = best
    cg = StableGraph(gens, edges, legs)
    # edge map: old edge k -> position in the sorted canonical edge list (stable for parallels)
    used: dict[tuple[int, int], int] = {}
    positions: dict[tuple[int, int], list[int]] = {}
    for k, e in enumerate(edges):
        positions.setdefault(e, []).append(k)
    emap = []
    for u, v in g.edges:
        e = (min(best_perm[u], best_perm[v]), max(best_perm[u], best_perm[v]))
        j = used.get(e, 0)
        emap.append(positions[e][j])
        used[e] = j + 1
    auts = tuple(p for p in _candidate_perms(cg) if _relabel_key(cg, p) == best)
    digest = hashlib.sha256(cg.canonical_bytes()).hexdigest()
    canon = Canonical(cg, tuple(best_perm), tuple(emap), auts, digest)
    if cg == g:
        return canon
    # make the canonical graph's own cache consistent
    cg.__dict__["_canon"] = Canonical(cg, tuple(range(cg.num_vertices)), tuple(range(cg.num_edges)), auts, digest)
    return canon


def canonical_form(g: StableGraph) -> StableGraph:
    return g.canonical().graph


def is_isomorphic(g1: StableGraph, g2: StableGraph) -> bool:
    return g1.digest == g2.digest


def edge_automorphisms(g: StableGraph) -> list[tuple[int, ...]]:
    """All permutations of edge indices induced by automorphisms of a canonical graph.

    Loops flipped onto themselves act trivially on edges, so the list has the
    size of Aut(G) modulo loop flips.  Legs are fixed.
    """
    if not g.is_canonical():
        raise GraphError("edge_automorphisms expects a canonical graph")
    parallel: dict[tuple[int, int], list[int]] = {}
    for k, e in enumerate(g.edges):
        parallel.setdefault(e, []).append(k)
    perms = set()
    for vperm in g.canonical().vertex_automorphisms:
        base = [0] * g.num_edges
        for e, ks in parallel.items():
            u, v = vperm[e[0]], vperm[e[1]]
            target = parallel[(min(u, v), max(u, v))]
            for k, t in zip(ks, target):
                base[k] = t
        classes = list(parallel.values())
        for shuffles in itertools.product(*(itertools.permutations(c) for c in classes)):
            inner = list(range(g.num_edges))
            for c, s in zip(classes, shuffles):
                for k, t in zip(c, s):
                    inner[k] = t
            perms.add(tuple(base[inner[k]] for k in range(g.num_edges)))
    return sorted(perms)


def edge_automorphism_generators(g: StableGraph) -> list[tuple[int, ...]]:
    """A small generating set: vertex automorphisms plus adjacent parallel swaps."""
    ident = tuple(range(g.num_edges))
    gens = set()
    parallel: dict[tuple[int, int], list[int]] = {}
    for k, e in enumerate(g.edges):
        parallel.setdefault(e, []).append(k)
    for vperm in g.canonical().vertex_automorphisms:
        base = [0] * g.num_edges
        for e, ks in parallel.items():
            u, v = vperm[e[0]], vperm[e[1]]
            for k, t in zip(ks, parallel[(min(u, v), max(u, v))]):
                base[k] = t
        gens.add(tuple(base))
    for ks in parallel.values():
        for a, b in zip(ks, ks[1:]):
            p = list(ident)
            p[a], p[b] = b, a
            gens.add(tuple(p))
    gens.discard(ident)
    return sorted(gens)


def automorphisms(g: StableGraph, fix_legs: bool = True) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Vertex automorphisms as (vertex permutation, leg permutation) pairs.

    With ``fix_legs=False`` legs may be permuted among themselves (the
    "declared symmetry" mode); leg permutations are given 0-based.
    """
    if fix_legs:
        return [(p, tuple(range(g.n))) for p in g.canonical().vertex_automorphisms]
    out = []
    target = (g.genera, tuple(sorted(g.edges)), Counter(g.legs))
    for perm in itertools.permutations(range(g.num_vertices)):
        if tuple(g.genera[perm.index(v)] for v in range(g.num_vertices)) != g.genera:
            continue
        edges = tuple(sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges))
        if edges != target[1] or Counter(perm[v] for v in g.legs) != target[2]:
            continue
        moved = [perm[v] for v in g.legs]
        pool = {v: [i for i, x in enumerate(g.legs) if x == v] for v in set(g.legs)}
        for choice in itertools.product(*(itertools.permutations(pool[v]) for v in sorted(pool))):
            assign = dict(zip(sorted(pool), choice))
            counters = {v: 0 for v in pool}
            legperm = []
            for i, w in enumerate(moved):
                legperm.append(assign[w][counters[w]])
                counters[w] += 1
            out.append((perm, tuple(legperm)))
    return out


# ---------------------------------------------------------------------------
# surgery


@dataclass(frozen=True)
class Correspondence:
    """Where vertices, edges and legs of an input graph went in an output graph.

    ``edges`` maps input edge index -> output edge index (missing = contracted
    or consumed); ``legs`` maps input marking -> output marking (1-based).
    ``new_edge`` is the output index of an edge created by gluing, if any.
    """

    vertices: Mapping[int, int]
    edges: Mapping[int, int]
    legs: Mapping[int, int]
    new_edge: int | None = None


def contract_edges(g: StableGraph, subset: Iterable[int]) -> tuple[StableGraph, Correspondence]:
    subset = set(subset)
    parent = list(range(g.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in subset:
        u, v = g.edges[k]
        parent[find(u)] = find(v)
    roots = sorted({find(v) for v in range(g.num_vertices)}, key=lambda r: min(v for v in range(g.num_vertices) if find(v) == r))
    newid = {r: i for i, r in enumerate(roots)}
    vmap = {v: newid[find(v)] for v in range(g.num_vertices)}
    genera = [0] * len(roots)
    size = Counter(vmap.values())
    contracted = Counter(vmap[g.edges[k][0]] for k in subset)
    for v, gv in enumerate(g.genera):
        genera[vmap[v]] += gv
    for w in range(len(roots)):
        genera[w] += contracted[w] - size[w] + 1
    edges, emap = [], {}
    for k, (u, v) in enumerate(g.edges):
        if k not in subset:
            emap[k] = len(edges)
            edges.append((vmap[u], vmap[v]))
    h = StableGraph(tuple(genera), tuple(edges), tuple(vmap[v] for v in g.legs))
    return h, Correspondence(vmap, emap, {i: i for i in range(1, g.n + 1)})


def _check_leg(g: StableGraph, p: int):
    if not 1 <= p <= g.n:
        raise NotALeg(f"{p} is not a leg of a graph with {g.n} legs")


def glue_graphs(g1: StableGraph, p: int, g2: StableGraph, q: int) -> tuple[StableGraph, Correspondence, Correspondence]:
    """Join leg p of g1 to leg q of g2 by a new edge (placed last).

    Output legs: g1's remaining legs in order, then g2's.  Returns the glued
    graph and one correspondence per input graph.
    """
    _check_leg(g1, p)
    _check_leg(g2, q)
    off = g1.num_vertices
    genera = g1.genera + g2.genera
    edges = list(g1.edges) + [(u + off, v + off) for u, v in g2.edges]
    new_edge = len(edges)
    edges.append((g1.legs[p - 1], g2.legs[q - 1] + off))
    legs1 = [i for i in range(1, g1.n + 1) if i != p]
    legs2 = [i for i in range(1, g2.n + 1) if i != q]
    legs = [g1.legs[i - 1] for i in legs1] + [g2.legs[i - 1] + off for i in legs2]
    out = StableGraph(genera, tuple(edges), tuple(legs))
    c1 = Correspondence(
        {v: v for v in range(g1.num_vertices)},
        {k: k for k in range(g1.num_edges)},
        {i: j + 1 for j, i in enumerate(legs1)},
        new_edge,
    )
    c2 = Correspondence(
        {v: v + off for v in range(g2.num_vertices)},
        {k: k + g1.num_edges for k in range(g2.num_edges)},
        {i: len(legs1) + j + 1 for j, i in enumerate(legs2)},
        new_edge,
    )
    return out, c1, c2


def glue_loop(g: StableGraph, p: int, q: int) -> tuple[StableGraph, Correspondence]:
    _check_leg(g, p)
    _check_leg(g, q)
    if p == q:
        raise SameLeg(f"cannot glue leg {p} to itself")
    new_edge = g.num_edges
    edges = g.edges + ((g.legs[p - 1], g.legs[q - 1]),)
    rest = [i for i in range(1, g.n + 1) if i not in (p, q)]
    out = StableGraph(g.genera, edges, tuple(g.legs[i - 1] for i in rest))
    corr = Correspondence(
        {v: v for v in range(g.num_vertices)},
        {k: k for k in range(g.num_edges)},
        {i: j + 1 for j, i in enumerate(rest)},
        new_edge,
    )
    return out, corr


def edge_label(k: int) -> str:
    return f"e{k}"


def leg_label(i: int) -> str:
    return f"l{i}"


Script = dict[str, dict[str, int]]


def forget_leg(g: StableGraph, k: int) -> tuple[StableGraph, Script]:
    """Remove leg k and stabilise.

    The script gives each coordinate of the output graph (``e*`` edge lengths,
    ``l*`` leg lengths) as a nonnegative integer combination of the input
    graph's coordinates: identity, the rational-tail rule ``l_j := l_j + l_e``
    or the rational-bridge rule ``l_e* := l_e1 + l_e2``.
    """
    _check_leg(g, k)
    if 2 * g.genus - 2 + g.n - 1 <= 0:
        raise ResultUnstable(f"(g, n) = ({g.genus}, {g.n - 1}) is unstable")
    v = g.legs[k - 1]
    rest = [i for i in range(1, g.n + 1) if i != k]
    legmap = {i: j + 1 for j, i in enumerate(rest)}

    def identity_script(h, emap):
        script = {edge_label(emap[e]): {edge_label(e): 1} for e in emap}
        script.update({leg_label(legmap[i]): {leg_label(i): 1} for i in rest})
        return script

    if g.genera[v] > 0 or g.valence(v) - 1 >= 3:
        h = StableGraph(g.genera, g.edges, tuple(g.legs[i - 1] for i in rest))
        return h, identity_script(h, {e: e for e in range(g.num_edges)})
    # genus-0 vertex left with two half-edges
    inc = [e for e, (a, b) in enumerate(g.edges) if v in (a, b)]
    others = [i for i in rest if g.legs[i - 1] == v]
    keep_v = [w for w in range(g.num_vertices) if w != v]
    vmap = {w: j for j, w in enumerate(keep_v)}
    genera = tuple(g.genera[w] for w in keep_v)
    if len(inc) == 1 and len(others) == 1:
        # rational tail carrying legs k and j
        e = inc[0]
        j = others[0]
        w = g.edges[e][0] if g.edges[e][1] == v else g.edges[e][1]
        emap = {}
        edges = []
        for f, (a, b) in enumerate(g.edges):
            if f != e:
                emap[f] = len(edges)
                edges.append((vmap[a], vmap[b]))
        legs = tuple(vmap[w] if i == j else vmap[g.legs[i - 1]] for i in rest)
        h = StableGraph(genera, tuple(edges), legs)
        script = identity_script(h, emap)
        script[leg_label(legmap[j])] = {leg_label(j): 1, edge_label(e): 1}
        return h, script
    if len(inc) == 2 and not others:
        e1, e2 = inc
        ends = []
        for e in (e1, e2):
            a, b = g.edges[e]
            ends.append(b if a == v else a)
        emap = {}
        edges = []
        for f, (a, b) in enumerate(g.edges):
            if f not in (e1, e2):
                emap[f] = len(edges)
                edges.append((vmap[a], vmap[b]))
        merged = len(edges)
        edges.append((vmap[ends[0]], vmap[ends[1]]))
        h = StableGraph(genera, tuple(edges), tuple(vmap[g.legs[i - 1]] for i in rest))
        script = identity_script(h, emap)
        script[edge_label(merged)] = {edge_label(e1): 1, edge_label(e2): 1}
        return h, script
    raise ResultUnstable("forgetting the leg leaves an unstable configuration")


# ---------------------------------------------------------------------------
# enumeration


def _check_signature(g: int, n: int, max_vertices: int, max_edges: int):
    if g < 0 or n < 0 or 2 * g - 2 + n <= 0:
        raise UnstableSignature(f"2g-2+n <= 0 for (g, n) = ({g}, {n})")
    if 2 * g - 2 + n > max_vertices or 3 * g - 3 + n > max_edges:
        raise ResourceBound(
            f"G_{{{g},{n}}} may need {2 * g - 2 + n} vertices / {3 * g - 3 + n} edges "
            f"(caps {max_vertices} / {max_edges})"
        )


def _splits(h: StableGraph):
    """All one-edge degenerations of h (inverse of a single contraction)."""
    for v, gv in enumerate(h.genera):
        if gv >= 1:
            genera = list(h.genera)
            genera[v] -= 1
            yield StableGraph(tuple(genera), h.edges + ((v, v),), h.legs)
        # half-edges at v: ("e", k, side) and ("l", i)
        halves = [("l", i) for i, x in enumerate(h.legs) if x == v]
        for k, (a, b) in enumerate(h.edges):
            if a == v:
                halves.append(("e", k, 0))
            if b == v:
                halves.append(("e", k, 1))
        nh = len(halves)
        w = h.num_vertices
        for mask in range(1 << nh):
            side_b = {halves[j] for j in range(nh) if mask >> j & 1}
            na = nh - len(side_b)
            nb = len(side_b)
            for g1 in range(gv + 1):
                g2 = gv - g1
                if 2 * g1 - 2 + na + 1 <= 0 or 2 * g2 - 2 + nb + 1 <= 0:
                    continue
                genera = tuple(g1 if x == v else h.genera[x] for x in range(w)) + (g2,)
                edges = []
                for k, (a, b) in enumerate(h.edges):
                    a2 = w if ("e", k, 0) in side_b else a
                    b2 = w if ("e", k, 1) in side_b else b
                    edges.append((a2, b2))
                edges.append((v, w))
                legs = tuple(w if ("l", i) in side_b else x for i, x in enumerate(h.legs))
                yield StableGraph(genera, tuple(edges), legs)


@lru_cache(maxsize=None)
def _enumerate(g: int, n: int) -> tuple[StableGraph, ...]:
    smooth = canonical_form(StableGraph((g,), (), tuple(0 for _ in range(n))))
    layers = [{smooth.digest: smooth}]
    while True:
        nxt: dict[str, StableGraph] = {}
        for h in layers[-1].values():
            for s in _splits(h):
                c = s.canonical()
                if c.digest not in nxt:
                    nxt[c.digest] = c.graph
        if not nxt:
            break
        layers.append(nxt)
    out = []
    for layer in layers:
        out.extend(sorted(layer.values(), key=lambda x: x.canonical_bytes()))
    return tuple(out)


def enumerate_stable_graphs(
    g: int, n: int, max_vertices: int = DEFAULT_MAX_VERTICES, max_edges: int = DEFAULT_MAX_EDGES
) -> list[tuple[StableGraph, int]]:
    """One canonical representative per isomorphism class of G_{g,n}, with |Aut|.

    Ordered by (number of edges, canonical bytes).
    """
    _check_signature(g, n, max_vertices, max_edges)
    return [(x, x.canonical().aut_order) for x in _enumerate(g, n)]


def smooth_graph(g: int, n: int) -> StableGraph:
    return canonical_form(StableGraph((g,), (), tuple(0 for _ in range(n))))
