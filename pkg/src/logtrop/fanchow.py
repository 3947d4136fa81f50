"""Piecewise polynomials on simplicial fans and Chow rings of smooth complete fans.

A piecewise polynomial is stored cone by cone in barycentric coordinates:
the variable ``r{j}`` is the coefficient of the j-th ray of the fan.  Two
maximal cones agree on their common face exactly when the monomials in the
face's rays have equal coefficients, which turns every question here into
exact rank computations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cones import Cone, ConeComplex, NotSimplicial, Subdivision, is_smooth, star_subdivision
from .linalg import EchelonSpan, nullspace, rank, solve
from .polynomial import Polynomial

MAX_RANK = 4
MAX_RAYS = 64


class FanError(Exception):
    pass


class NotComplete(FanError):
    pass


class NotSmooth(FanError):
    pass


class NotARefinementChain(FanError):
    pass


def _monomials(variables: Sequence[str], d: int) -> list[tuple]:
    out = []
    for combo in itertools.combinations_with_replacement(variables, d):
        counts: dict[str, int] = {}
        for v in combo:
            counts[v] = counts.get(v, 0) + 1
        out.append(tuple(sorted(counts.items())))
    return out


class FanPP:
    """Graded piecewise polynomials on a simplicial fan."""

    def __init__(self, fan: ConeComplex):
        if not fan.is_simplicial():
            raise NotSimplicial("piecewise polynomials are computed on simplicial fans only")
        if fan.ambient > MAX_RANK or len(fan.rays) > MAX_RAYS:
            raise FanError(f"fans up to rank {MAX_RANK} with at most {MAX_RAYS} rays are supported")
        self.fan = fan
        self.rays = sorted(fan.rays)
        self.ray_index = {r: j for j, r in enumerate(self.rays)}
        self.maximal = list(fan.maximal)
        self.vars = [[f"r{self.ray_index[r]}" for r in c.rays] for c in self.maximal]
        self._cache: dict[int, tuple] = {}

    def var(self, ray) -> str:
        return f"r{self.ray_index[tuple(ray)]}"

    def layout(self, d: int) -> list[tuple[int, tuple]]:
        """Coordinates of degree-d vectors: (maximal cone index, monomial)."""
        return [(i, m) for i, vs in enumerate(self.vars) for m in _monomials(vs, d)]

    def agreement(self, d: int) -> list[list[int]]:
        index = {k: n for n, k in enumerate(self.layout(d))}
        rows = []
        for a, b in itertools.combinations(range(len(self.maximal)), 2):
            shared = sorted(set(self.vars[a]) & set(self.vars[b]))
            for m in _monomials(shared, d):
                row = [0] * len(index)
                row[index[(a, m)]] = 1
                row[index[(b, m)]] = -1
                rows.append(row)
        return rows

    def basis(self, d: int) -> list[list[Fraction]]:
        """A basis of the degree-d piecewise polynomials as coordinate vectors."""
        if d not in self._cache:
            n = len(self.layout(d))
            rows = self.agreement(d)
            self._cache[d] = nullspace(rows, n) if rows else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        return self._cache[d]

    def dimension(self, d: int) -> int:
        return len(self.basis(d))

    def to_polys(self, d: int, vec: Sequence) -> list[Polynomial]:
        polys = [dict() for _ in self.maximal]
        for (i, m), c in zip(self.layout(d), vec):
            if c:
                polys[i][m] = c
        return [Polynomial(p) for p in polys]

    def to_vector(self, d: int, polys: Sequence[Polynomial]) -> list[Fraction]:
        return [Fraction(polys[i].terms.get(m, 0)) for i, m in self.layout(d)]

    def linear_function(self, coords: Sequence) -> list[Polynomial]:
        """A global linear function, written on each maximal cone."""
        return [
            Polynomial.linear({v: sum(Fraction(a) * b for a, b in zip(coords, r)) for v, r in zip(vs, c.rays)})
            for vs, c in zip(self.vars, self.maximal)
        ]


def pp_dimensions(fan: ConeComplex, max_degree: int) -> list[int]:
    """Dimensions of the degree 0..max_degree piecewise polynomials."""
    pp = FanPP(fan)
    return [pp.dimension(d) for d in range(max_degree + 1)]


def stanley_reisner_count(fan: ConeComplex, d: int) -> int:
    """Monomials of degree d in the rays whose support spans a cone of the fan."""
    cones = {frozenset(c.rays) for c in fan.cones}
    rays = sorted(fan.rays)
    return sum(
        1
        for combo in itertools.combinations_with_replacement(range(len(rays)), d)
        if frozenset(rays[j] for j in combo) in cones
    )


# ---------------------------------------------------------------------------
# Chow rings


def completeness_problems(fan: ConeComplex) -> list[str]:
    d = fan.ambient
    out = []
    if any(c.dim != d for c in fan.maximal):
        out.append("fan has maximal cones of lower dimension")
    walls: dict[Cone, int] = {}
    for c in fan.maximal:
        for f in c.facet_cones():
            walls[f] = walls.get(f, 0) + 1
    out += [f"wall {w!r} lies in {k} maximal cone(s)" for w, k in walls.items() if k != 2]
    return out


@dataclass
class FanChowPresentation:
    fan: ConeComplex
    max_degree: int
    dimensions: list[int]
    basis: dict[int, list[list[Polynomial]]] = field(repr=False)
    ideal_generators: list[list[Polynomial]] = field(repr=False)
    table: dict[tuple[int, int, int, int], list[Fraction]] = field(repr=False)

    def product(self, i: int, a: int, j: int, b: int) -> list[Fraction]:
        """Coordinates of basis[i][a] * basis[j][b] in basis[i + j]."""
        return self.table[(i, a, j, b)]

    def product_is_zero(self, i: int, a: int, j: int, b: int) -> bool:
        return not any(self.table[(i, a, j, b)])

    def to_json(self) -> dict:
        return {
            "fan": self.fan.to_json(),
            "max_degree": self.max_degree,
            "dimensions": self.dimensions,
            "basis": {
                str(k): [[p.to_json() for p in elt] for elt in elts] for k, elts in sorted(self.basis.items())
            },
            "ideal_generators": [[p.to_json() for p in g] for g in self.ideal_generators],
            "multiplication": [
                {"left": [i, a], "right": [j, b], "coefficients": [str(x) for x in v]}
                for (i, a, j, b), v in sorted(self.table.items())
            ],
            "presentation": "piecewise polynomials modulo global linear functions",
        }


def chow_ring(fan: ConeComplex, max_degree: int | None = None) -> FanChowPresentation:
    problems = completeness_problems(fan)
    if problems:
        raise NotComplete("; ".join(problems))
    if not fan.is_smooth():
        raise NotSmooth("some maximal cone is not unimodular")
    pp = FanPP(fan)
    top = fan.ambient if max_degree is None else max_degree
    linear = [pp.linear_function([int(i == j) for j in range(fan.ambient)]) for i in range(fan.ambient)]

    quotient: dict[int, list[list[Fraction]]] = {}
    spans: dict[int, EchelonSpan] = {}
    q_index: dict[int, list[int]] = {}
    # products of two top-degree classes are reduced too, hence 2 * top
    for d in range(2 * top + 1):
        span = EchelonSpan()
        if d >= 1:
            for vec in pp.basis(d - 1):
                polys = pp.to_polys(d - 1, vec)
                for lin in linear:
                    span.add(pp.to_vector(d, [p * q for p, q in zip(polys, lin)]))
        chosen, where = [], []
        for vec in pp.basis(d):
            idx = span.count
            if span.add(vec):
                chosen.append(vec)
                where.append(idx)
        quotient[d], spans[d], q_index[d] = chosen, span, where

    table = {}
    for i in range(top + 1):
        for j in range(i, top + 1):
            k = i + j
            for a, va in enumerate(quotient[i]):
                pa = pp.to_polys(i, va)
                for b, vb in enumerate(quotient[j]):
                    pb = pp.to_polys(j, vb)
                    prod = pp.to_vector(k, [x * y for x, y in zip(pa, pb)])
                    rem, used = spans[k].reduce(prod)
                    if rem:
                        raise FanError("product is not piecewise polynomial; the fan is inconsistent")
                    coeffs = [used.get(idx, Fraction(0)) for idx in q_index[k]]
                    table[(i, a, j, b)] = coeffs
                    table[(j, b, i, a)] = coeffs
    return FanChowPresentation(
        fan,
        top,
        [len(quotient[d]) for d in range(top + 1)],
        {d: [pp.to_polys(d, v) for v in quotient[d]] for d in range(top + 1)},
        list(linear),
        table,
    )


def line_fan() -> ConeComplex:
    return ConeComplex.from_rays([[(1,)], [(-1,)]], 1)


def polygon_fan(rays: Sequence[Sequence[int]]) -> ConeComplex:
    """The complete rank-2 fan with the given rays listed counterclockwise."""
    rays = [tuple(r) for r in rays]
    return ConeComplex.from_rays([[rays[i], rays[(i + 1) % len(rays)]] for i in range(len(rays))], 2)


# ---------------------------------------------------------------------------
# refinement chains


def _refines(coarse: ConeComplex, fine: ConeComplex) -> list[str]:
    out = []
    for c in fine.maximal:
        if not any(t.contains_cone(c) for t in coarse.maximal):
            out.append(f"{c!r} is not inside any cone of the previous fan")
    out += Subdivision(coarse, fine).problems()
    return out


def transition_matrix(old: FanPP, new: FanPP, d: int) -> list[list[Fraction]]:
    """Images of the degree-d basis of ``old`` under pullback to ``new``."""
    subs = []
    for c, vs in zip(new.maximal, new.vars):
        host = next(i for i, t in enumerate(old.maximal) if t.contains_cone(c))
        hrays = old.maximal[host].rays
        mapping: dict[str, Polynomial] = {}
        cols = [list(col) for col in zip(*hrays)]
        coords = [solve(cols, r) for r in c.rays]
        for k, hv in enumerate(old.vars[host]):
            mapping[hv] = Polynomial.linear({v: coords[m][k] for m, v in enumerate(vs)})
        subs.append((host, mapping))
    images = []
    for vec in old.basis(d):
        polys = old.to_polys(d, vec)
        images.append(new.to_vector(d, [polys[h].substitute(mp, keep_unmapped=False) for h, mp in subs]))
    return images


@dataclass
class ProbeStep:
    fan: ConeComplex
    dimensions: list[int]
    injective: list[bool] | None


@dataclass
class ProbeReport:
    steps: list[ProbeStep]
    note: str = (
        "growth along one chosen chain witnesses unbounded dimension in the colimit; it is not a proof"
    )

    def to_json(self) -> dict:
        return {
            "steps": [
                {
                    "fan": s.fan.to_json(),
                    "dimensions": s.dimensions,
                    "transition_injective": s.injective,
                }
                for s in self.steps
            ],
            "note": self.note,
        }


def logch_probe(cone: Cone | ConeComplex, chain: Sequence, max_degree: int = 2) -> ProbeReport:
    """Dimensions along a refinement chain, with the transitions checked injective.

    ``chain`` holds either rays (star subdivision of the previous fan at that
    ray) or explicit fans.
    """
    fan = cone if isinstance(cone, ConeComplex) else ConeComplex([cone], cone.ambient)
    pp = FanPP(fan)
    steps = [ProbeStep(fan, [pp.dimension(d) for d in range(max_degree + 1)], None)]
    for item in chain:
        if isinstance(item, ConeComplex):
            nxt = item
        elif isinstance(item, Subdivision):
            nxt = item.refined
        else:
            nxt = star_subdivision(fan, tuple(int(x) for x in item)).refined
        issues = _refines(fan, nxt)
        if issues:
            raise NotARefinementChain("; ".join(issues))
        new = FanPP(nxt)
        injective = []
        for d in range(max_degree + 1):
            images = transition_matrix(pp, new, d)
            injective.append(rank(images) == len(images) if images else True)
        steps.append(ProbeStep(nxt, [new.dimension(d) for d in range(max_degree + 1)], injective))
        fan, pp = nxt, new
    return ProbeReport(steps)


def orthant_fan(d: int) -> ConeComplex:
    return ConeComplex([Cone.orthant(d)], d)


def smooth_fan_check(fan: ConeComplex) -> bool:
    return all(is_smooth(c) for c in fan.maximal)
