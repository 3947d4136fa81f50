"""Exact rational polyhedral cones, cone complexes and subdivisions.

Dual descriptions come from a double-description loop that adds one
inequality at a time (a Fourier-Motzkin style elimination) with an algebraic
adjacency test, so no redundant generators survive.  Everything is integral
or rational; there is no floating point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .linalg import det, dot, lattice_index, nullspace, primitive, rank, rref, solve

IntVec = tuple[int, ...]


class ConeError(Exception):
    pass


class NotStronglyConvex(ConeError):
    pass


class RayOutsideSupport(ConeError):
    pass


class NotSimplicial(ConeError):
    pass


class NotARay(ConeError):
    pass


class NotFaceClosed(ConeError):
    pass


class MapLeavesSupport(ConeError):
    pass


class TargetMismatch(ConeError):
    pass


def _neg(v):
    return tuple(-x for x in v)


def double_description(ineqs: Sequence[Sequence[int]], eqs: Sequence[Sequence[int]], d: int):
    """Generators of {x in Q^d : a.x >= 0 for a in ineqs, b.x = 0 for b in eqs}.

    Returns ``(rays, lineality)``: primitive integer extreme rays (modulo the
    lineality space) and an integer basis of the lineality space.
    """
    eqs = [tuple(int(x) for x in b) for b in eqs if any(b)]
    if eqs:
        lin = [primitive(v) for v in nullspace(eqs)]
    else:
        lin = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    rays: list[IntVec] = []
    processed: list[IntVec] = list(eqs)
    for a in ineqs:
        a = tuple(int(x) for x in a)
        if not any(a):
            continue
        j = next((k for k, v in enumerate(lin) if dot(a, v) != 0), None)
        if j is not None:
            v = lin[j]
            av = dot(a, v)
            if av < 0:
                v, av = _neg(v), -av
            lin = [primitive(tuple(av * x - dot(a, w) * y for x, y in zip(w, v))) for k, w in enumerate(lin) if k != j]
            lin = [w for w in lin if any(w)]
            rays = [primitive(tuple(av * x - dot(a, r) * y for x, y in zip(r, v))) for r in rays]
            rays.append(primitive(v))
        else:
            vals = [dot(a, r) for r in rays]
            pos = [r for r, s in zip(rays, vals) if s > 0]
            neg = [r for r, s in zip(rays, vals) if s < 0]
            new = [r for r, s in zip(rays, vals) if s >= 0]
            if neg:
                full = d - len(lin)
                for p in pos:
                    tp = [c for c in processed if dot(c, p) == 0]
                    ap = dot(a, p)
                    for n in neg:
                        common = [c for c in tp if dot(c, n) == 0]
                        if rank(common) != full - 2:
                            continue
                        an = dot(a, n)
                        new.append(primitive(tuple(ap * x - an * y for x, y in zip(n, p))))
            rays = list(dict.fromkeys(new))
        processed.append(a)
    return sorted(set(rays)), lin


def _project_out(v: Sequence[int], basis: Sequence[Sequence[int]]) -> IntVec:
    """Primitive representative of v modulo span(basis), orthogonal to that span."""
    if not basis:
        return primitive(v)
    gram = [[dot(b1, b2) for b2 in basis] for b1 in basis]
    coef = solve(gram, [dot(b, v) for b in basis])
    w = [Fraction(x) - sum(c * b[i] for c, b in zip(coef, basis)) for i, x in enumerate(v)]
    return primitive(w)


class Cone:
    """A strongly convex rational polyhedral cone given by its extreme rays."""

    def __init__(self, rays: Iterable[Sequence[int]], ambient: int | None = None, _trusted: bool = False):
        rays = [primitive(r) for r in rays]
        rays = sorted({r for r in rays if any(r)})
        if ambient is None:
            if not rays:
                raise ConeError("ambient rank needed for the zero cone")
            ambient = len(rays[0])
        self.ambient = ambient
        self._input = tuple(rays)
        if not _trusted:
            facets = self.facets
            w = [sum(col) for col in zip(*facets)] if facets else [0] * ambient
            if any(dot(w, r) <= 0 for r in rays):
                raise NotStronglyConvex(f"cone generated by {rays} contains a line")
            eqs = self.equations
            rays = [r for r in rays if rank(list(eqs) + [f for f in facets if dot(f, r) == 0]) == ambient - 1]
        self.rays: tuple[IntVec, ...] = tuple(rays)

    @classmethod
    def from_inequalities(cls, ineqs, eqs, ambient: int) -> "Cone":
        rays, lin = double_description(ineqs, eqs, ambient)
        if lin:
            raise NotStronglyConvex("inequalities cut out a cone with a lineality space")
        return cls(rays, ambient, _trusted=True)

    @classmethod
    def orthant(cls, d: int) -> "Cone":
        return cls([tuple(int(i == j) for j in range(d)) for i in range(d)], d, _trusted=True)

    @cached_property
    def _dual(self):
        rays, lin = double_description(self._input, [], self.ambient)
        facets = sorted({_project_out(f, lin) for f in rays})
        return facets, lin

    @property
    def facets(self) -> list[IntVec]:
        """Inward facet normals, normalised to lie in the span of the cone."""
        return self._dual[0]

    @property
    def equations(self) -> list[IntVec]:
        """A basis of the covectors vanishing on the cone."""
        return self._dual[1]

    @property
    def dim(self) -> int:
        return rank(self.rays) if self.rays else 0

    def contains(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(f, x) >= 0 for f in self.facets)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(r) for r in other.rays)

    def in_relative_interior(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(f, x) > 0 for f in self.facets)

    def interior_point(self) -> tuple:
        return tuple(sum(col) for col in zip(*self.rays)) if self.rays else tuple([0] * self.ambient)

    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    def facet_cones(self) -> list["Cone"]:
        out = []
        for f in self.facets:
            out.append(Cone([r for r in self.rays if dot(f, r) == 0], self.ambient, _trusted=True))
        return out

    @cached_property
    def _faces(self) -> tuple["Cone", ...]:
        seen = {self.rays: self}
        todo = [self]
        while todo:
            c = todo.pop()
            for f in c.facet_cones():
                if f.rays not in seen:
                    seen[f.rays] = f
                    todo.append(f)
        return tuple(sorted(seen.values(), key=lambda c: (c.dim, c.rays)))

    def faces(self) -> tuple["Cone", ...]:
        """All faces including the cone itself and the origin, by dimension."""
        return self._faces

    def is_face(self, other: "Cone") -> bool:
        return any(f.rays == other.rays for f in self.faces())

    def intersect(self, other: "Cone") -> "Cone":
        return Cone.from_inequalities(
            list(self.facets) + list(other.facets), list(self.equations) + list(other.equations), self.ambient
        )

    def join(self, extra: Iterable[Sequence[int]]) -> "Cone":
        return Cone(list(self.rays) + [tuple(r) for r in extra], self.ambient)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.ambient == other.ambient and self.rays == other.rays

    def __hash__(self):
        return hash((self.ambient, self.rays))

    def __lt__(self, other):
        return (self.dim, self.rays) < (other.dim, other.rays)

    def __repr__(self):
        return f"Cone({[list(r) for r in self.rays]})"

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays]}


def is_smooth(c: Cone) -> bool:
    return c.is_simplicial() and lattice_index(c.rays) == 1


# ---------------------------------------------------------------------------
# volumes


def triangulate(c: Cone) -> list[tuple[IntVec, ...]]:
    """Pulling triangulation into simplicial cones (returned as ray tuples)."""
    if c.is_simplicial():
        return [c.rays]
    r0 = c.rays[0]
    out = []
    for f in c.facet_cones():
        if r0 not in f.rays:
            out.extend(s + (r0,) for s in triangulate(f))
    return out


def _span_coords(rays: Sequence[Sequence[int]]) -> list[int]:
    """Coordinates on which projection is injective on the span of ``rays``."""
    _, piv = rref([list(col) for col in zip(*rays)]) if rays else ([], [])
    # pivots of the transposed matrix pick independent coordinate rows
    return piv


def normalized_volume(c: Cone, coords: Sequence[int], w: Sequence) -> Fraction:
    """Volume of c ∩ {w.x <= 1} after projecting onto ``coords`` (up to a fixed factor)."""
    if c.dim != len(coords):
        return Fraction(0)
    total = Fraction(0)
    for simplex in triangulate(c):
        m = [[r[i] for i in coords] for r in simplex]
        denom = 1
        for r in simplex:
            denom *= dot(w, r)
        total += Fraction(abs(det(m)), denom)
    return total


def covering_defect(container: Cone, pieces: Sequence[Cone]) -> list[str]:
    """Problems preventing ``pieces`` from subdividing ``container`` (empty when fine)."""
    problems = []
    k = container.dim
    full = [p for p in pieces if p.dim == k]
    for p in pieces:
        if not container.contains_cone(p):
            problems.append(f"{p!r} sticks out of {container!r}")
    if k == 0:
        return problems if full else problems + ["origin not covered"]
    coords = _span_coords(container.rays)
    w = [sum(col) for col in zip(*container.facets)]
    for a, b in itertools.combinations(full, 2):
        if a.intersect(b).dim == k:
            problems.append(f"{a!r} and {b!r} overlap")
    if problems:
        return problems
    vol = sum((normalized_volume(p, coords, w) for p in full), Fraction(0))
    target = normalized_volume(container, coords, w)
    if vol != target:
        problems.append(f"pieces cover volume {vol} of {target} in {container!r}")
    return problems


# ---------------------------------------------------------------------------
# complexes


class ConeComplex:
    """A collection of cones closed under faces, stored by its maximal cones."""

    def __init__(self, cones: Iterable[Cone], ambient: int | None = None):
        cones = list(dict.fromkeys(cones))
        if ambient is None:
            ambient = cones[0].ambient
        self.ambient = ambient
        maximal = [c for c in cones if not any(c != o and o.is_face(c) for o in cones)]
        self.maximal: tuple[Cone, ...] = tuple(sorted(maximal, key=lambda c: (-c.dim, c.rays)))

    @classmethod
    def from_rays(cls, cones: Iterable[Iterable[Sequence[int]]], ambient: int) -> "ConeComplex":
        return cls([Cone(r, ambient) for r in cones], ambient)

    @cached_property
    def cones(self) -> tuple[Cone, ...]:
        allc = {}
        for m in self.maximal:
            for f in m.faces():
                allc[f.rays] = f
        return tuple(sorted(allc.values(), key=lambda c: (c.dim, c.rays)))

    @property
    def rays(self) -> list[IntVec]:
        return [c.rays[0] for c in self.cones if c.dim == 1]

    def contains(self, x) -> bool:
        return any(c.contains(x) for c in self.maximal)

    def carrier(self, x) -> Cone | None:
        """The smallest cone containing the point x."""
        return next((c for c in self.cones if c.contains(x)), None)

    def is_simplicial(self) -> bool:
        return all(c.is_simplicial() for c in self.maximal)

    def is_smooth(self) -> bool:
        return all(is_smooth(c) for c in self.maximal)

    def fan_problems(self) -> list[str]:
        """Pairs of maximal cones that do not meet in a common face."""
        out = []
        for a, b in itertools.combinations(self.maximal, 2):
            m = a.intersect(b)
            if not (a.is_face(m) and b.is_face(m)):
                out.append(f"{a!r} ∩ {b!r} is not a common face")
        return out

    def has_cone(self, c: Cone) -> bool:
        return c in set(self.cones)

    def __eq__(self, other):
        return isinstance(other, ConeComplex) and self.ambient == other.ambient and set(self.maximal) == set(other.maximal)

    def __hash__(self):
        return hash((self.ambient, frozenset(self.maximal)))

    def __repr__(self):
        return f"ConeComplex(rank={self.ambient}, maximal={list(self.maximal)})"

    def to_json(self) -> dict:
        return {"rank": self.ambient, "cones": [c.to_json() for c in self.maximal]}

    @classmethod
    def from_json(cls, data: Mapping) -> "ConeComplex":
        d = int(data["rank"])
        return cls([Cone([tuple(int(x) for x in r) for r in c["rays"]], d) for c in data["cones"]], d)


@dataclass(frozen=True)
class Subdivision:
    target: ConeComplex
    refined: ConeComplex

    @property
    def assignment(self) -> dict[Cone, Cone]:
        """Each refined maximal cone mapped to the smallest target cone containing it."""
        return {c: self.carrier(c) for c in self.refined.maximal}

    def carrier(self, c: Cone) -> Cone | None:
        return self.target.carrier(c.interior_point())

    def pieces_in(self, t: Cone) -> list[Cone]:
        """Refined cones of full dimension inside the target cone t."""
        return [c for c in self.refined.cones if c.dim == t.dim and t.contains_cone(c)]

    def problems(self) -> list[str]:
        out = []
        for c in self.refined.maximal:
            if self.carrier(c) is None or not self.carrier(c).contains_cone(c):
                out.append(f"{c!r} is not inside a target cone")
        for t in self.target.maximal:
            out.extend(covering_defect(t, self.pieces_in(t)))
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def is_trivial(self) -> bool:
        return self.refined == self.target

    def restrict(self, sub: ConeComplex) -> "Subdivision":
        keep = [c for c in self.refined.cones if any(t.contains_cone(c) for t in sub.maximal)]
        return Subdivision(sub, ConeComplex(keep, self.target.ambient))

    def to_json(self) -> dict:
        tcones = list(self.target.cones)
        return {
            "target": self.target.to_json(),
            "refined": self.refined.to_json(),
            "assignment": [[list(r) for r in self.carrier(c).rays] for c in self.refined.maximal],
            "target_cone_count": len(tcones),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Subdivision":
        return cls(ConeComplex.from_json(data["target"]), ConeComplex.from_json(data["refined"]))


def trivial_subdivision(x: ConeComplex) -> Subdivision:
    return Subdivision(x, x)


# ---------------------------------------------------------------------------
# subdivision algorithms


def star_subdivision(x: ConeComplex | Subdivision, rho: Sequence[int]) -> Subdivision:
    """Stellar subdivision at the ray through rho.

    Accepts a complex or an existing subdivision (whose refined complex is
    subdivided further; the target is kept).
    """
    base = x.refined if isinstance(x, Subdivision) else x
    target = x.target if isinstance(x, Subdivision) else x
    rho = primitive(rho)
    if not any(rho) or not base.contains(rho):
        raise RayOutsideSupport(f"{list(rho)} is not in the support")
    new = []
    for c in base.maximal:
        if not c.contains(rho) or rho in c.rays:
            new.append(c)
            continue
        for f in c.facet_cones():
            if not f.contains(rho):
                new.append(Cone(f.rays + (rho,), base.ambient, _trusted=True))
    return Subdivision(target, ConeComplex(new, base.ambient))


@dataclass(frozen=True)
class ConewiseLinear:
    """A function linear on each cone of a simplicial complex."""

    complex: ConeComplex
    forms: tuple[tuple[Cone, tuple[Fraction, ...]], ...]
    ray_values: Mapping[IntVec, Fraction]

    def form_on(self, c: Cone) -> tuple[Fraction, ...]:
        for cone, form in self.forms:
            if cone.contains_cone(c):
                return form
        raise RayOutsideSupport(f"{c!r} not in the domain")

    def __call__(self, x: Sequence) -> Fraction:
        for cone, form in self.forms:
            if cone.contains(x):
                return dot(form, x)
        raise RayOutsideSupport(f"{list(x)} not in the domain")


def linear_form_on(c: Cone, values: Sequence) -> tuple[Fraction, ...]:
    """A covector w with w.r = value for each ray r of the simplicial cone c."""
    if not c.is_simplicial():
        raise NotSimplicial(repr(c))
    if not c.rays:
        return tuple(Fraction(0) for _ in range(c.ambient))
    sol = solve([list(r) for r in c.rays], list(values))
    return tuple(sol)


def conewise_linear(x: ConeComplex, values: Mapping[IntVec, Fraction]) -> ConewiseLinear:
    if not x.is_simplicial():
        raise NotSimplicial("conewise-linear interpolation needs simplicial cones")
    forms = tuple((c, linear_form_on(c, [values.get(r, 0) for r in c.rays])) for c in x.maximal)
    return ConewiseLinear(x, forms, {r: Fraction(values.get(r, 0)) for r in x.rays})


def phi_function(s: Subdivision | ConeComplex, tau: Sequence[int]) -> ConewiseLinear:
    """Piecewise-linear function equal to 1 on tau and 0 on every other ray."""
    x = s.refined if isinstance(s, Subdivision) else s
    tau = primitive(tau)
    if not x.is_simplicial():
        raise NotSimplicial("phi needs a simplicial refinement")
    if tau not in x.rays:
        raise NotARay(f"{list(tau)} is not a ray of the refined complex")
    return conewise_linear(x, {tau: Fraction(1)})


def extend_subdivision(x: ConeComplex, delta: ConeComplex, s_delta: Subdivision) -> Subdivision:
    """Extend a subdivision of a face-closed subcomplex to the whole complex.

    Cones of x are processed by increasing dimension.  A cone of delta takes
    the pieces of s_delta inside it; any other cone whose boundary has been
    refined is replaced by the cone from its central ray (the sum of its rays)
    over the refined boundary.  Smooth input stays smooth and the restriction
    to delta is exactly s_delta.
    """
    xcones = set(x.cones)
    for c in delta.maximal:
        if c not in xcones:
            raise NotFaceClosed(f"{c!r} is not a cone of the complex")
    if s_delta.target != delta:
        raise TargetMismatch("the subdivision is not of the given subcomplex")
    dcones = set(delta.cones)
    pieces: dict[Cone, list[Cone]] = {}
    for c in x.cones:
        if c in dcones:
            pieces[c] = s_delta.pieces_in(c) if c.dim else [c]
            continue
        facets = c.facet_cones()
        if all(pieces[f] == [f] for f in facets):
            pieces[c] = [c]
            continue
        centre = primitive(c.interior_point())
        pieces[c] = [
            Cone(p.rays + (centre,), x.ambient, _trusted=True) for f in facets for p in pieces[f]
        ]
    refined = [p for c in x.maximal for p in pieces[c]]
    return Subdivision(x, ConeComplex(refined, x.ambient))


def _linear_image(matrix: Sequence[Sequence[int]], v: Sequence[int]) -> tuple:
    return tuple(dot(row, v) for row in matrix)


def preimage_pieces(matrix: Sequence[Sequence[int]], source: ConeComplex, s: Subdivision) -> list[tuple[Cone, Cone, Cone]]:
    """Triples (piece, source cone, refined target cone) of the pulled-back subdivision.

    ``matrix`` has one row per target coordinate.  Pieces are the full
    dimensional sets C ∩ f⁻¹(τ) for refined target cones τ minimal with that
    property, which makes their interiors disjoint.
    """
    d = source.ambient
    out = []
    for c in source.maximal:
        for r in c.rays:
            if not s.refined.contains(_linear_image(matrix, r)):
                raise MapLeavesSupport(f"ray {list(r)} maps outside the target support")
        found = []
        for tau in s.refined.cones:
            ineqs = list(c.facets) + [tuple(dot(f, col) for col in zip(*matrix)) for f in tau.facets]
            eqs = list(c.equations) + [tuple(dot(e, col) for col in zip(*matrix)) for e in tau.equations]
            piece = Cone.from_inequalities(ineqs, eqs, d)
            if piece.dim == c.dim:
                found.append((tau, piece))
        # cones are listed by dimension, so a proper face always comes first
        minimal = []
        for tau, piece in found:
            if not any(t != tau and tau.is_face(t) for t, _ in minimal):
                minimal.append((tau, piece))
        found = {piece: tau for tau, piece in minimal}
        for piece, tau in found.items():
            out.append((piece, c, tau))
        problems = covering_defect(c, [p for p, cc, _ in out if cc == c])
        if problems:
            raise MapLeavesSupport(f"preimage pieces do not cover {c!r}: {problems[0]}")
    return out


def preimage_subdivision(matrix: Sequence[Sequence[int]], source: ConeComplex, s: Subdivision) -> Subdivision:
    pieces = preimage_pieces(matrix, source, s)
    return Subdivision(source, ConeComplex([p for p, _, _ in pieces], source.ambient))


def common_refinement(s1: Subdivision, s2: Subdivision) -> Subdivision:
    if s1.target != s2.target:
        raise TargetMismatch("subdivisions of different complexes")
    pieces = []
    for t in s1.target.maximal:
        for a in s1.pieces_in(t):
            for b in s2.pieces_in(t):
                m = a.intersect(b)
                if m.dim == t.dim:
                    pieces.append(m)
    return Subdivision(s1.target, ConeComplex(pieces, s1.target.ambient))
