"""Balanced piecewise-linear functions on tropical curves.

Orientation convention: edge ``(u, v)`` with ``u <= v`` runs from u to v and
its slope ``s`` is the outgoing slope at u, so the function grows by
``s * length`` from u to v.  Legs carry their prescribed outgoing slope
``a_i``.  A slope assignment is balanced when at every vertex the outgoing
edge slopes plus the leg slopes sum to zero; loops contribute nothing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cones import Cone
from .graphs import StableGraph, edge_label, glue_graphs, leg_label
from .linalg import hermite_normal_form, nullspace, primitive, rank
from .moduli import gluing_morphism
from .polynomial import ZERO, Polynomial


class DivError(Exception):
    pass


class NonZeroSum(DivError):
    pass


class NotBalanced(DivError):
    pass


class SlopeMismatch(DivError):
    pass


class ValueMismatch(DivError):
    pass


class ZeroLength(DivError):
    pass


def divergence(graph: StableGraph, slopes: Sequence[int], a: Sequence[int]) -> list[int]:
    div = [0] * graph.num_vertices
    for (u, v), s in zip(graph.edges, slopes):
        if u != v:
            div[u] += s
            div[v] -= s
    for v, ai in zip(graph.legs, a):
        div[v] += ai
    return div


def _spanning_tree(graph: StableGraph) -> tuple[list[int], list[int]]:
    """Tree edge indices and the remaining (cycle) edges, loops included."""
    parent = list(range(graph.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree, rest = [], []
    for k, (u, v) in enumerate(graph.edges):
        ru, rv = find(u), find(v)
        if ru == rv:
            rest.append(k)
        else:
            parent[ru] = rv
            tree.append(k)
    return tree, rest


def _solve_tree(graph: StableGraph, tree: list[int], fixed: Mapping[int, int], a: Sequence[int]) -> dict[int, int]:
    """Slopes on tree edges making every vertex balanced, given the other slopes."""
    excess = divergence(graph, [fixed.get(k, 0) for k in range(graph.num_edges)], a)
    remaining = set(tree)
    out = {}
    while remaining:
        # peel a leaf of the remaining forest
        deg = [0] * graph.num_vertices
        for k in remaining:
            u, v = graph.edges[k]
            deg[u] += 1
            deg[v] += 1
        k = next(k for k in sorted(remaining) if deg[graph.edges[k][0]] == 1 or deg[graph.edges[k][1]] == 1)
        u, v = graph.edges[k]
        if deg[u] == 1:
            s = -excess[u]
        else:
            s = excess[v]
        out[k] = s
        excess[u] += s
        excess[v] -= s
        remaining.discard(k)
    return out


@dataclass(frozen=True)
class SlopeEnumeration:
    graph: StableGraph
    a: tuple[int, ...]
    bound: int
    assignments: tuple[tuple[int, ...], ...]
    free_parameters: int

    @property
    def complete(self) -> bool:
        """True when the list is all balanced assignments, not only the bounded ones."""
        return self.free_parameters == 0

    def to_json(self) -> dict:
        return {
            "graph_digest": self.graph.digest,
            "a": list(self.a),
            "bound": self.bound,
            "exhaustive_within_bound": True,
            "complete": self.complete,
            "count": len(self.assignments),
            "assignments": [list(s) for s in self.assignments],
        }


def enumerate_balanced_slopes(graph: StableGraph, a: Sequence[int], slope_bound: int) -> SlopeEnumeration:
    """All balanced edge slopes with ``|s_e| <= slope_bound``, in lexicographic order."""
    a = tuple(int(x) for x in a)
    if len(a) != graph.n:
        raise DivError(f"expected {graph.n} leg slopes, got {len(a)}")
    if sum(a) != 0:
        raise NonZeroSum(f"leg slopes {list(a)} do not sum to zero")
    if slope_bound < 0:
        raise DivError("slope bound must be nonnegative")
    tree, cycle = _spanning_tree(graph)
    rng = range(-slope_bound, slope_bound + 1)
    found = []
    for free in itertools.product(rng, repeat=len(cycle)):
        fixed = dict(zip(cycle, free))
        fixed.update(_solve_tree(graph, tree, fixed, a))
        slopes = tuple(fixed[k] for k in range(graph.num_edges))
        if all(abs(s) <= slope_bound for s in slopes):
            found.append(slopes)
    return SlopeEnumeration(graph, a, slope_bound, tuple(sorted(found)), len(cycle))


# ---------------------------------------------------------------------------
# Div cones


@dataclass(frozen=True)
class DivCone:
    """Lengths admitting vertex values with value(v) - value(u) = s_e * l_e on every edge."""

    graph: StableGraph
    slopes: tuple[int, ...]
    labels: tuple[str, ...]
    equations: tuple[tuple[int, ...], ...]
    image: Cone

    def to_json(self) -> dict:
        return {
            "graph_digest": self.graph.digest,
            "slopes": list(self.slopes),
            "labels": list(self.labels),
            "equations": [list(e) for e in self.equations],
            "image": self.image.to_json(),
        }


def cycle_basis(graph: StableGraph) -> list[tuple[int, ...]]:
    """Integer basis of the cycle space (signed edge combinations with zero boundary)."""
    if graph.num_edges == 0:
        return []
    inc = [[0] * graph.num_edges for _ in range(graph.num_vertices)]
    for k, (u, v) in enumerate(graph.edges):
        if u != v:
            inc[u][k] -= 1
            inc[v][k] += 1
    return [primitive(z) for z in nullspace(inc, graph.num_edges)]


def div_cone(graph: StableGraph, slopes: Sequence[int], a: Sequence[int] | None = None, pointed: bool = True) -> DivCone:
    """Image in the stratum orthant of the solution space of the value/slope equations.

    Vertex values are eliminated exactly: a length vector is in the image iff
    sum_e z_e s_e l_e = 0 for every cycle z.
    """
    slopes = tuple(int(s) for s in slopes)
    if a is not None and any(divergence(graph, slopes, a)):
        raise NotBalanced(f"slopes {list(slopes)} are not balanced for {list(a)}")
    labels = tuple(edge_label(k) for k in range(graph.num_edges))
    if pointed:
        labels += tuple(leg_label(i) for i in range(1, graph.n + 1))
    d = len(labels)
    eqs = []
    for z in cycle_basis(graph):
        row = [z[k] * slopes[k] for k in range(graph.num_edges)] + [0] * (d - graph.num_edges)
        if any(row):
            eqs.append(primitive(row))
    # keep an independent, canonical set of equations
    eqs = sorted(set(eqs))
    basis = []
    for e in eqs:
        if rank(basis + [e]) > len(basis):
            basis.append(e)
    ineqs = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    image = Cone.from_inequalities(ineqs, basis, d)
    return DivCone(graph, slopes, labels, tuple(basis), image)


# ---------------------------------------------------------------------------
# PL functions and their gluing


def _reduce(p: Polynomial, relations: Sequence[Polynomial]) -> bool:
    """Is the linear form p in the span of ``relations``?"""
    if p.is_zero():
        return True
    if not relations:
        return False
    vars_ = sorted(set().union(p.variables(), *(r.variables() for r in relations)))

    def row(q):
        co = q.linear_coefficients()
        return [co.get(v, 0) for v in vars_] + [q.constant_term()]

    rows = [row(r) for r in relations]
    return rank(rows + [row(p)]) == rank(rows)


@dataclass(frozen=True)
class PLFunction:
    """Piecewise-linear data on a tropical curve with symbolic lengths.

    Vertex values, edge lengths and leg lengths are linear forms in some
    coordinate labels; ``relations`` lists linear forms known to vanish (the
    cycle constraints of the underlying Div cone).
    """

    graph: StableGraph
    values: tuple[Polynomial, ...]
    edge_slopes: tuple[int, ...]
    edge_lengths: tuple[Polynomial, ...]
    leg_slopes: tuple[int, ...]
    leg_lengths: tuple[Polynomial, ...]
    relations: tuple[Polynomial, ...] = field(default=())
    # for glued functions: (f1 graph, p, f2 graph, q, l_p, l_q, number of f1 relations)
    origin: tuple | None = field(default=None, compare=False, repr=False)

    def endpoint_value(self, i: int) -> Polynomial:
        """Value at the far end of leg i (1-based)."""
        return self.values[self.graph.legs[i - 1]] + self.leg_lengths[i - 1] * self.leg_slopes[i - 1]

    def problems(self) -> list[str]:
        out = []
        for k, ((u, v), s) in enumerate(zip(self.graph.edges, self.edge_slopes)):
            diff = self.values[v] - self.values[u] - self.edge_lengths[k] * s
            if not _reduce(diff, self.relations):
                out.append(f"edge {k}: value difference is not slope times length")
        div = divergence(self.graph, self.edge_slopes, self.leg_slopes)
        for v, x in enumerate(div):
            if x:
                out.append(f"vertex {v}: divergence {x}")
        return out

    def shifted(self, c: Polynomial) -> "PLFunction":
        return PLFunction(
            self.graph,
            tuple(v + c for v in self.values),
            self.edge_slopes,
            self.edge_lengths,
            self.leg_slopes,
            self.leg_lengths,
            self.relations,
        )


def pl_function_from_slopes(
    graph: StableGraph, slopes: Sequence[int], a: Sequence[int], prefix: str = "", base: Polynomial = ZERO
) -> PLFunction:
    """Integrate balanced slopes along a spanning tree from vertex 0 (value ``base``)."""
    if any(divergence(graph, slopes, a)):
        raise NotBalanced(f"slopes {list(slopes)} are not balanced for {list(a)}")
    lengths = tuple(Polynomial.var(prefix + edge_label(k)) for k in range(graph.num_edges))
    legs = tuple(Polynomial.var(prefix + leg_label(i)) for i in range(1, graph.n + 1))
    values: list[Polynomial | None] = [None] * graph.num_vertices
    values[0] = base
    tree, cycle = _spanning_tree(graph)
    pending = list(tree)
    while pending:
        for k in list(pending):
            u, v = graph.edges[k]
            if values[u] is not None and values[v] is None:
                values[v] = values[u] + lengths[k] * slopes[k]
            elif values[v] is not None and values[u] is None:
                values[u] = values[v] - lengths[k] * slopes[k]
            else:
                continue
            pending.remove(k)
    relations = []
    for k in cycle:
        u, v = graph.edges[k]
        rel = values[v] - values[u] - lengths[k] * slopes[k]
        if not rel.is_zero():
            relations.append(rel)
    return PLFunction(graph, tuple(values), tuple(slopes), lengths, tuple(a), legs, tuple(relations))


def glue_pl_functions(f1: PLFunction, p: int, f2: PLFunction, q: int) -> PLFunction:
    """Glue leg p of f1 to leg q of f2 into an edge of length l_p + l_q.

    Requires the leg slopes to add to zero and the far-end values of the two
    legs to agree; the new edge carries slope(p).
    """
    sp, sq = f1.leg_slopes[p - 1], f2.leg_slopes[q - 1]
    if sp + sq != 0:
        raise SlopeMismatch(f"slopes {sp} and {sq} at the glued legs do not add to 0")
    relations = f1.relations + f2.relations
    if not _reduce(f1.endpoint_value(p) - f2.endpoint_value(q), relations):
        raise ValueMismatch("values at the glued legs differ")
    graph, c1, c2 = glue_graphs(f1.graph, p, f2.graph, q)
    values = f1.values + f2.values
    edge_slopes = f1.edge_slopes + f2.edge_slopes + (sp,)
    edge_lengths = f1.edge_lengths + f2.edge_lengths + (f1.leg_lengths[p - 1] + f2.leg_lengths[q - 1],)
    keep1 = [i for i in range(1, f1.graph.n + 1) if i != p]
    keep2 = [i for i in range(1, f2.graph.n + 1) if i != q]
    leg_slopes = tuple(f1.leg_slopes[i - 1] for i in keep1) + tuple(f2.leg_slopes[i - 1] for i in keep2)
    leg_lengths = tuple(f1.leg_lengths[i - 1] for i in keep1) + tuple(f2.leg_lengths[i - 1] for i in keep2)
    origin = (f1.graph, p, f2.graph, q, f1.leg_lengths[p - 1], f2.leg_lengths[q - 1], len(f1.relations))
    return PLFunction(graph, values, edge_slopes, edge_lengths, leg_slopes, leg_lengths, relations, origin)


def restrict_glued(glued: PLFunction) -> tuple[PLFunction, PLFunction]:
    """Split a function produced by :func:`glue_pl_functions` back into its two sides."""
    if glued.origin is None:
        raise DivError("function was not produced by gluing")
    g1, p, g2, q, lp, lq, nrel = glued.origin
    nv1, ne1, ne2 = g1.num_vertices, g1.num_edges, g2.num_edges
    s = glued.edge_slopes[ne1 + ne2]
    n1 = g1.n - 1

    def side(graph, vals, eslopes, elens, leg_s, leg_l, leg, slope, length, rels):
        slopes, lens = list(leg_s), list(leg_l)
        slopes.insert(leg - 1, slope)
        lens.insert(leg - 1, length)
        return PLFunction(graph, vals, eslopes, elens, tuple(slopes), tuple(lens), rels)

    f1 = side(
        g1, glued.values[:nv1], glued.edge_slopes[:ne1], glued.edge_lengths[:ne1],
        glued.leg_slopes[:n1], glued.leg_lengths[:n1], p, s, lp, glued.relations[:nrel],
    )
    f2 = side(
        g2, glued.values[nv1:], glued.edge_slopes[ne1:ne1 + ne2], glued.edge_lengths[ne1:ne1 + ne2],
        glued.leg_slopes[n1:], glued.leg_lengths[n1:], q, -s, lq, glued.relations[nrel:],
    )
    return f1, f2


# ---------------------------------------------------------------------------
# glued node monoid


@dataclass(frozen=True)
class SharpMonoid:
    """{(a1, a2) in N^k x N^k : a1 - a2 in Z * d} with d = l1 + l2."""

    k: int
    d: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    box: int

    def contains(self, x: Sequence[int]) -> bool:
        x = tuple(int(t) for t in x)
        if len(x) != 2 * self.k or any(t < 0 for t in x):
            return False
        diff = [x[i] - x[self.k + i] for i in range(self.k)]
        j = next(i for i, t in enumerate(self.d) if t)
        if diff[j] % self.d[j]:
            return False
        m = diff[j] // self.d[j]
        return all(diff[i] == m * self.d[i] for i in range(self.k))

    def is_sharp(self) -> bool:
        return all(all(t >= 0 for t in g) and any(g) for g in self.generators)

    def closure_in_box(self, side: int) -> set[tuple[int, ...]]:
        """Elements of the generated monoid with every coordinate <= side."""
        zero = (0,) * (2 * self.k)
        seen = {zero}
        todo = [zero]
        while todo:
            x = todo.pop()
            for g in self.generators:
                y = tuple(a + b for a, b in zip(x, g))
                if max(y) <= side and y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    def members_in_box(self, side: int) -> set[tuple[int, ...]]:
        return {x for x in itertools.product(range(side + 1), repeat=2 * self.k) if self.contains(x)}

    def group_lattice(self) -> list[list[int]]:
        return hermite_normal_form([list(g) for g in self.generators])

    def expected_lattice(self) -> list[list[int]]:
        rows = [[int(i == j) for j in range(self.k)] * 2 for i in range(self.k)]
        rows.append(list(self.d) + [0] * self.k)
        return hermite_normal_form(rows)

    def to_json(self) -> dict:
        return {"k": self.k, "d": list(self.d), "box": self.box, "generators": [list(g) for g in self.generators]}


def glue_node_monoid(k: int, l1: Sequence[int], l2: Sequence[int]) -> SharpMonoid:
    """Monoid of pairs of sections along a node of length l1 + l2.

    Generators are the irreducible elements found in the box of side
    ``2 * max(d)``; the caller can confirm sufficiency with
    :meth:`SharpMonoid.closure_in_box`.
    """
    l1, l2 = tuple(int(x) for x in l1), tuple(int(x) for x in l2)
    if len(l1) != k or len(l2) != k or any(x < 0 for x in l1 + l2):
        raise DivError("lengths must be vectors in N^k")
    d = tuple(x + y for x, y in zip(l1, l2))
    if not any(d):
        raise ZeroLength("l1 + l2 is zero")
    side = 2 * max(d)
    probe = SharpMonoid(k, d, (), side)
    members = sorted(x for x in probe.members_in_box(side) if any(x))
    mset = set(members)
    gens = []
    for x in members:
        reducible = False
        for y in itertools.product(*(range(t + 1) for t in x)):
            if any(y) and y != x and y in mset:
                reducible = True
                break
        if not reducible:
            gens.append(x)
    gens.sort(key=lambda g: (sum(g), tuple(-t for t in g)))
    return SharpMonoid(k, d, tuple(gens), side)


# ---------------------------------------------------------------------------
# the gluing square


@dataclass
class SquareReport:
    signature: tuple[int, int, int, int]
    a: tuple[int, ...]
    bound: int
    strata_checked: int = 0
    glued_assignments: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "signature": list(self.signature),
            "a": list(self.a),
            "bound": self.bound,
            "strata_checked": self.strata_checked,
            "glued_assignments": self.glued_assignments,
            "passed": self.passed,
            "mismatches": self.mismatches,
        }


def gluing_weights(n1: int, a: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Leg slopes on the two factors: the glued legs get -sum and +sum of the first block."""
    first = sum(a[:n1])
    return tuple(a[:n1]) + (-first,), tuple(a[n1:]) + (first,)


def check_div_gluing_square(g1: int, n1: int, g2: int, n2: int, a: Sequence[int], slope_bound: int) -> SquareReport:
    """Compare bounded Div data on glued strata with glueable pairs of Div data on the factors.

    For every product stratum: the balanced slopes on the glued graph must be
    exactly the concatenations of balanced slopes on the two sides (new edge
    slope forced to the glued leg slope), and every target Div cone must pull
    back along the gluing script to the product of the factor Div cones.
    """
    a = tuple(int(x) for x in a)
    if len(a) != n1 + n2:
        raise DivError(f"expected {n1 + n2} weights")
    if sum(a) != 0:
        raise NonZeroSum(f"weights {list(a)} do not sum to zero")
    b1, b2 = gluing_weights(n1, a)
    morph = gluing_morphism(g1, n1, g2, n2)
    report = SquareReport((g1, n1, g2, n2), a, slope_bound)
    for s in morph.source:
        gr1, gr2 = s.graph
        glued, _, _ = glue_graphs(gr1, n1 + 1, gr2, n2 + 1)
        canon = glued.canonical()
        tgt_graph = canon.graph
        tkey, script = morph.mapping[s.key]
        report.strata_checked += 1
        side1 = enumerate_balanced_slopes(gr1, b1, slope_bound).assignments
        side2 = enumerate_balanced_slopes(gr2, b2, slope_bound).assignments
        new_slope = b1[-1]
        transported = {}
        if abs(new_slope) <= slope_bound:
            for x in side1:
                for y in side2:
                    raw = x + y + (new_slope,)
                    slopes = [0] * glued.num_edges
                    for k, (u, v) in enumerate(glued.edges):
                        flip = canon.vertex_map[u] > canon.vertex_map[v]
                        slopes[canon.edge_map[k]] = -raw[k] if flip else raw[k]
                    transported[tuple(slopes)] = (x, y)
        target = set(enumerate_balanced_slopes(tgt_graph, a, slope_bound).assignments)
        report.glued_assignments += len(target)
        if set(transported) != target:
            extra = sorted(target - set(transported))[:3]
            missing = sorted(set(transported) - target)[:3]
            report.mismatches.append(f"{s.key[:12]}: target-only {extra}, pairs-only {missing}")
            continue
        d = len(s.labels)
        orthant = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        for t, (x, y) in sorted(transported.items()):
            cone_t = div_cone(tgt_graph, t, a)
            cone_1 = div_cone(gr1, x, b1)
            cone_2 = div_cone(gr2, y, b2)
            pulled = []
            for row in cone_t.equations:
                acc = dict.fromkeys(s.labels, 0)
                for lab, coef in zip(cone_t.labels, row):
                    for src, c in script[lab].items():
                        acc[src] += coef * c
                pulled.append([acc[lab] for lab in s.labels])
            d1 = len(cone_1.labels)
            product = [list(row) + [0] * (d - d1) for row in cone_1.equations]
            product += [[0] * d1 + list(row) for row in cone_2.equations]
            if Cone.from_inequalities(orthant, pulled, d) != Cone.from_inequalities(orthant, product, d):
                report.mismatches.append(f"{s.key[:12]}: cones differ for slopes {list(t)}")
    return report


__all__ = [
    "DivCone",
    "PLFunction",
    "SharpMonoid",
    "SlopeEnumeration",
    "SquareReport",
    "check_div_gluing_square",
    "div_cone",
    "divergence",
    "enumerate_balanced_slopes",
    "glue_node_monoid",
    "glue_pl_functions",
    "gluing_weights",
    "pl_function_from_slopes",
    "restrict_glued",
]
