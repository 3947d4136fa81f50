"""Independent brute-force oracles used to freeze expected values.

Nothing here imports ``logtrop``; every routine works from first principles so
that the library paths it checks stay independent.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial


def _connected(nv, edges):
    seen = {0}
    stack = [0]
    adj = {v: set() for v in range(nv)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == nv


def _structure_key(genera, legs, edges, perm):
    g2 = [None] * len(genera)
    for v, pv in enumerate(perm):
        g2[pv] = genera[v]
    l2 = tuple(perm[v] for v in legs)
    e2 = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
    return (tuple(g2), l2, e2)


def labeled_stable_graphs(g, n):
    """Yield every vertex-labelled stable graph (genera, legs, edge multiset)."""
    max_v = 2 * g - 2 + n
    for nv in range(1, max_v + 1):
        pairs = [(u, v) for u in range(nv) for v in range(u, nv)]
        for genera in itertools.product(range(g + 1), repeat=nv):
            num_edges = g - sum(genera) + nv - 1
            if num_edges < 0:
                continue
            for legs in itertools.product(range(nv), repeat=n):
                for edges in itertools.combinations_with_replacement(pairs, num_edges):
                    if not _connected(nv, edges):
                        continue
                    val = [0] * nv
                    for v in legs:
                        val[v] += 1
                    for u, v in edges:
                        val[u] += 1
                        val[v] += 1
                    if all(2 * genera[v] - 2 + val[v] > 0 for v in range(nv)):
                        yield genera, legs, edges


def brute_force_classes(g, n):
    """Return (number of isomorphism classes, sum of 1/|Aut|).

    Classes are found by minimising over *all* vertex permutations; the mass is
    computed without any isomorphism test, as a sum over labelled structures
    weighted by 1/(V! * prod(m!) * 2^loops).
    """
    classes = set()
    mass = Fraction(0)
    for genera, legs, edges in labeled_stable_graphs(g, n):
        nv = len(genera)
        key = min(
            _structure_key(genera, legs, edges, perm)
            for perm in itertools.permutations(range(nv))
        )
        classes.add(key)
        weight = factorial(nv)
        counts = {}
        for e in edges:
            counts[e] = counts.get(e, 0) + 1
        for (u, v), m in counts.items():
            weight *= factorial(m)
            if u == v:
                weight *= 2 ** m
        mass += Fraction(1, weight)
    return len(classes), mass


def balanced_slopes_bruteforce(num_vertices, edges, leg_vertices, a, bound):
    """All edge-slope tuples in [-bound, bound] with zero divergence.

    Edge k = (u, v) is oriented u -> v; its outgoing slope is s at u and -s at
    v.  Legs contribute their outgoing slope a_i at their vertex.
    """
    out = []
    for slopes in itertools.product(range(-bound, bound + 1), repeat=len(edges)):
        div = [0] * num_vertices
        for (u, v), s in zip(edges, slopes):
            div[u] += s
            div[v] -= s
        for v, ai in zip(leg_vertices, a):
            div[v] += ai
        if all(x == 0 for x in div):
            out.append(slopes)
    return out


def h_vector(maximal_cones, dim):
    """h-vector of a complete simplicial fan from its face counts.

    ``maximal_cones`` is a list of ray-index tuples.  For a smooth complete
    fan this is the list of Chow ring dimensions.
    """
    faces = set()
    for c in maximal_cones:
        for k in range(len(c) + 1):
            faces.update(frozenset(s) for s in itertools.combinations(c, k))
    f = [sum(1 for s in faces if len(s) == i) for i in range(dim + 1)]
    return [
        sum((-1) ** (i - k) * _binom(i, k) * f[dim - i] for i in range(k, dim + 1))
        for k in range(dim + 1)
    ]


def _binom(a, b):
    return factorial(a) // (factorial(b) * factorial(a - b)) if 0 <= b <= a else 0


def face_ring_count(maximal_cones, d):
    """Degree-d monomials supported on a face, for cones given as ray-index tuples."""
    faces = set()
    for c in maximal_cones:
        for k in range(len(c) + 1):
            faces.update(frozenset(s) for s in itertools.combinations(c, k))
    rays = sorted({r for c in maximal_cones for r in c})
    return sum(1 for m in itertools.combinations_with_replacement(rays, d) if frozenset(m) in faces)


def forgotten_leg_terms(genera, edges, legs, forgotten):
    """Labels summing to the pullback of each leg length when a leg is forgotten.

    The forgotten leg sits on a vertex v.  If v is a genus-0 trivalent vertex
    carrying exactly one other leg j and one edge, stabilisation contracts
    that edge into leg j, so l_j picks up the edge length.
    """
    v = legs[forgotten - 1]
    others = [i + 1 for i, w in enumerate(legs) if w == v and i + 1 != forgotten]
    at_v = [k for k, (a, b) in enumerate(edges) if v in (a, b)]
    valence = len(others) + 1 + sum((a == v) + (b == v) for a, b in edges)
    out = {}
    for j in range(1, len(legs) + 1):
        if j == forgotten:
            continue
        terms = {f"l{j}"}
        if genera[v] == 0 and valence == 3 and others == [j] and len(at_v) == 1:
            terms.add(f"e{at_v[0]}")
        out[j] = terms
    return out
