"""Piecewise-polynomial classes on cone stacks.

On each stratum a class is a :class:`Piecewise` function: a list of pieces,
each a full-dimensional cone of the stratum orthant with a polynomial in the
stratum's coordinate labels.  A piece whose cone is ``None`` covers the whole
orthant; classes with only such pieces are strict.  Binary operations and
equality pass through the common refinement of the pieces.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .cones import Cone, ConeComplex, Subdivision, covering_defect, linear_form_on, preimage_pieces, star_subdivision
from .graphs import StableGraph, contract_edges, edge_label, leg_label, validate_graph
from .moduli import ConeStack, ModuliConeStack, ProductStack, StackMorphism, build_moduli, canonical_labels, product_stack
from .polynomial import ZERO, Polynomial


class PPError(Exception):
    pass


class BaseMismatch(PPError):
    pass


class NonNilpotentExp(PPError):
    pass


class NotPointed(PPError):
    pass


class NotOneEdge(PPError):
    pass


class DegreeError(PPError):
    pass


class NonZeroSumWarning(UserWarning):
    pass


Piece = tuple  # (Cone | None, Polynomial)


def _vec_to_point(labels: Sequence[str], v: Sequence) -> dict[str, Fraction]:
    return {lab: Fraction(x) for lab, x in zip(labels, v)}


def _param_substitution(labels: Sequence[str], rays: Sequence[Sequence[int]]) -> dict[str, Polynomial]:
    """x = sum_j t_j r_j, as polynomials in fresh variables ``_t{j}``."""
    out = {}
    for i, lab in enumerate(labels):
        out[lab] = Polynomial.linear({f"_t{j}": r[i] for j, r in enumerate(rays) if r[i]})
    return out


def vanishes_on(p: Polynomial, labels: Sequence[str], cone: Cone) -> bool:
    """Does p vanish identically on the linear span of ``cone``?"""
    if p.is_zero():
        return True
    return p.substitute(_param_substitution(labels, cone.rays)).is_zero()


@dataclass(frozen=True)
class Piecewise:
    labels: tuple[str, ...]
    pieces: tuple[Piece, ...]

    @classmethod
    def strict(cls, labels: Sequence[str], p: Polynomial) -> "Piecewise":
        return cls(tuple(labels), ((None, p),))

    @property
    def is_strict(self) -> bool:
        return len(self.pieces) == 1 and self.pieces[0][0] is None

    def orthant(self) -> Cone:
        return Cone.orthant(len(self.labels))

    def cones(self) -> list[Cone]:
        return [c if c is not None else self.orthant() for c, _ in self.pieces]

    def items(self) -> list[tuple[Cone, Polynomial]]:
        return [(c if c is not None else self.orthant(), p) for c, p in self.pieces]

    def map(self, fn: Callable[[Polynomial], Polynomial]) -> "Piecewise":
        return Piecewise(self.labels, tuple((c, fn(p)) for c, p in self.pieces)).simplified()

    def combine(self, other: "Piecewise", fn) -> "Piecewise":
        if self.labels != other.labels:
            raise BaseMismatch("pieces live on different coordinates")
        if self.is_strict and other.is_strict:
            return Piecewise.strict(self.labels, fn(self.pieces[0][1], other.pieces[0][1]))
        d = len(self.labels)
        out = []
        for c1, p1 in self.pieces:
            for c2, p2 in other.pieces:
                if c1 is None or c2 is None:
                    c = c2 if c1 is None else c1
                else:
                    c = c1.intersect(c2)
                    if c.dim != d:
                        continue
                out.append((c, fn(p1, p2)))
        return Piecewise(self.labels, tuple(out)).simplified()

    def simplified(self) -> "Piecewise":
        polys = {p for _, p in self.pieces}
        if len(polys) == 1 and not self.is_strict:
            return Piecewise.strict(self.labels, polys.pop())
        return self

    def is_zero(self) -> bool:
        return all(p.is_zero() for _, p in self.pieces)

    def equals(self, other: "Piecewise") -> bool:
        return self.combine(other, lambda a, b: a - b).is_zero()

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        v = [point.get(lab, 0) for lab in self.labels]
        for c, p in self.items():
            if c.contains(v):
                return p.evaluate(point)
        raise PPError(f"point {v} is outside the orthant")

    def restrict_zero(self, label: str) -> "Piecewise":
        """Restrict to the facet ``label = 0``; the label is dropped."""
        idx = self.labels.index(label)
        rest = tuple(x for x in self.labels if x != label)
        if self.is_strict:
            return Piecewise.strict(rest, self.pieces[0][1].set_zero([label]))
        d = len(self.labels)
        facet = Cone([tuple(int(i == j) for j in range(d)) for i in range(d) if i != idx], d, _trusted=True)
        out = []
        for c, p in self.items():
            f = c.intersect(facet)
            if f.dim == d - 1:
                rays = [tuple(x for i, x in enumerate(r) if i != idx) for r in f.rays]
                out.append((Cone(rays, d - 1, _trusted=True), p.set_zero([label])))
        return Piecewise(rest, tuple(out)).simplified()

    def transport(self, relabel: Mapping[str, str], new_labels: Sequence[str]) -> "Piecewise":
        """Rename coordinates; ``relabel`` must be a bijection onto new_labels."""
        new_labels = tuple(new_labels)
        pos = [new_labels.index(relabel[x]) for x in self.labels]
        out = []
        for c, p in self.pieces:
            if c is not None:
                rays = []
                for r in c.rays:
                    w = [0] * len(new_labels)
                    for i, x in enumerate(r):
                        w[pos[i]] = x
                    rays.append(tuple(w))
                c = Cone(rays, len(new_labels), _trusted=True)
            out.append((c, p.rename(relabel)))
        return Piecewise(new_labels, tuple(out))

    def problems(self) -> list[tuple[str, str, Polynomial | None]]:
        """Covering and continuity violations as (kind, detail, witness) triples."""
        if self.is_strict:
            return []
        out = []
        cones = self.cones()
        for msg in covering_defect(self.orthant(), cones):
            out.append(("covering", msg, None))
        d = len(self.labels)
        items = self.items()
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                (c1, p1), (c2, p2) = items[i], items[j]
                wall = c1.intersect(c2)
                if wall.dim == d - 1 and not vanishes_on(p1 - p2, self.labels, wall):
                    out.append(("continuity", f"pieces {list(c1.rays)} and {list(c2.rays)} disagree on their wall", p1 - p2))
        return out

    def to_json(self) -> list:
        return [
            {"rays": None if c is None else [list(r) for r in c.rays], "poly": p.to_json()} for c, p in self.pieces
        ]

    @classmethod
    def from_json(cls, labels: Sequence[str], data) -> "Piecewise":
        pieces = []
        for item in data:
            rays = item.get("rays")
            cone = None if rays is None else Cone([tuple(int(x) for x in r) for r in rays], len(labels))
            pieces.append((cone, Polynomial.from_json(item["poly"])))
        return cls(tuple(labels), tuple(pieces))


@dataclass(frozen=True)
class Violation:
    kind: str
    stratum: str
    detail: str
    witness: Polynomial | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "stratum": self.stratum,
            "detail": self.detail,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


@dataclass(frozen=True)
class PPReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


class PPClass:
    """A piecewise-polynomial class: one :class:`Piecewise` per stratum."""

    def __init__(self, stack: ConeStack, data: Mapping[str, Piecewise]):
        self.stack = stack
        self.data = {key: data[key] for key in stack.strata}

    # constructors
    @classmethod
    def from_function(cls, stack: ConeStack, fn: Callable) -> "PPClass":
        return cls(stack, {s.key: Piecewise.strict(s.labels, fn(s)) for s in stack})

    @classmethod
    def constant(cls, stack: ConeStack, c=1) -> "PPClass":
        return cls.from_function(stack, lambda s: Polynomial.constant(c))

    @classmethod
    def zero(cls, stack: ConeStack) -> "PPClass":
        return cls.from_function(stack, lambda s: ZERO)

    @property
    def is_strict(self) -> bool:
        return all(pw.is_strict for pw in self.data.values())

    def on(self, key: str) -> Piecewise:
        return self.data[key]

    def poly(self, key: str) -> Polynomial:
        """The polynomial of a strict stratum."""
        pw = self.data[key]
        if not pw.is_strict:
            raise PPError("stratum carries a subdivision")
        return pw.pieces[0][1]

    # ring structure
    def _check(self, other: "PPClass"):
        if not isinstance(other, PPClass) or other.stack != self.stack:
            raise BaseMismatch("classes live on different stacks")

    def _binary(self, other, fn) -> "PPClass":
        if isinstance(other, (int, Fraction, Polynomial)):
            other = PPClass.constant(self.stack, other) if not isinstance(other, Polynomial) else PPClass.from_function(self.stack, lambda s: other)
        self._check(other)
        return PPClass(self.stack, {k: self.data[k].combine(other.data[k], fn) for k in self.data})

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return self.map(lambda p: -p)

    def __pow__(self, k: int):
        out = PPClass.constant(self.stack, 1)
        for _ in range(k):
            out = out * self
        return out

    def map(self, fn: Callable[[Polynomial], Polynomial]) -> "PPClass":
        return PPClass(self.stack, {k: pw.map(fn) for k, pw in self.data.items()})

    def graded_part(self, k: int) -> "PPClass":
        return self.map(lambda p: p.graded_part(k))

    def truncate(self, max_deg: int) -> "PPClass":
        return self.map(lambda p: p.truncate(max_deg))

    def degrees(self) -> set[int]:
        return {d for pw in self.data.values() for _, p in pw.pieces for d in p.degrees()}

    def is_homogeneous(self, k: int) -> bool:
        return all(p.is_homogeneous(k) for pw in self.data.values() for _, p in pw.pieces)

    def exp_truncated(self, max_deg: int) -> "PPClass":
        return exp_truncated(self, max_deg)

    def is_zero(self) -> bool:
        return all(pw.is_zero() for pw in self.data.values())

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PPClass.constant(self.stack, other)
        if not isinstance(other, PPClass):
            return NotImplemented
        if other.stack != self.stack:
            return False
        return all(self.data[k].equals(other.data[k]) for k in self.data)

    __hash__ = None

    def nonzero_strata(self) -> list[str]:
        return [k for k, pw in self.data.items() if not pw.is_zero()]

    # validation
    def validate(self) -> PPReport:
        out = []
        for s in self.stack:
            pw = self.data[s.key]
            for kind, detail, wit in pw.problems():
                out.append(Violation(kind, s.key, detail, wit))
            for face in s.faces:
                restricted = pw.restrict_zero(face.label)
                target = self.stack[face.key]
                moved = restricted.transport(face.relabel, target.labels)
                diff = moved.combine(self.data[face.key], lambda a, b: a - b)
                if not diff.is_zero():
                    wit = next(p for _, p in diff.pieces if not p.is_zero())
                    out.append(Violation("face", s.key, f"restriction to {face.label}=0 differs from stratum {face.key[:12]}", wit))
            for perm in s.automorphisms(generators_only=True):
                moved = pw.transport(perm, s.labels)
                diff = moved.combine(pw, lambda a, b: a - b)
                if not diff.is_zero():
                    wit = next(p for _, p in diff.pieces if not p.is_zero())
                    out.append(Violation("automorphism", s.key, f"not invariant under {perm}", wit))
        return PPReport(tuple(out))

    # serialisation
    def to_json(self) -> dict:
        return {
            "stack": stack_descriptor(self.stack),
            "subdivided": not self.is_strict,
            "strata": [
                {"graph_digest": s.key, "labels": list(s.labels), "cones": self.data[s.key].to_json()} for s in self.stack
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PPClass":
        stack = stack_from_descriptor(data["stack"])
        pieces = {}
        for entry in data["strata"]:
            key = entry["graph_digest"]
            if key not in stack.strata:
                raise BaseMismatch(f"unknown stratum {key}")
            pieces[key] = Piecewise.from_json(stack[key].labels, entry["cones"])
        missing = [k for k in stack.strata if k not in pieces]
        for k in missing:
            pieces[k] = Piecewise.strict(stack[k].labels, ZERO)
        return cls(stack, pieces)

    def __repr__(self):
        body = []
        for s in self.stack:
            pw = self.data[s.key]
            if pw.is_strict:
                body.append(f"{s.key[:8]}: {pw.pieces[0][1]}")
            else:
                body.append(f"{s.key[:8]}: {len(pw.pieces)} pieces")
        return "PPClass(" + "; ".join(body) + ")"


def stack_descriptor(stack: ConeStack) -> dict:
    if isinstance(stack, ModuliConeStack):
        return {"g": stack.g, "n": stack.n, "pointed": stack.pointed}
    if isinstance(stack, ProductStack):
        return {"product": [stack_descriptor(stack.first), stack_descriptor(stack.second)]}
    raise PPError(f"cannot describe {stack!r}")


def stack_from_descriptor(d: Mapping) -> ConeStack:
    if "product" in d:
        a, b = d["product"]
        return product_stack(stack_from_descriptor(a), stack_from_descriptor(b))
    return build_moduli(int(d["g"]), int(d["n"]), bool(d.get("pointed", True)))


# ---------------------------------------------------------------------------
# standard classes


def length_class(stack: ModuliConeStack, i: int) -> PPClass:
    """The leg-length function l_i (its log Chow image is minus psi_i)."""
    if not getattr(stack, "pointed", False):
        raise NotPointed("leg lengths need a pointed stack")
    if not 1 <= i <= stack.n:
        raise PPError(f"no marking {i}")
    return PPClass.from_function(stack, lambda s: Polynomial.var(leg_label(i)))


def boundary_class(stack: ModuliConeStack, delta: StableGraph | Mapping) -> PPClass:
    """Sum of l_e over edges e whose one-edge contraction type is delta."""
    delta = validate_graph(delta)
    if delta.num_edges != 1:
        raise NotOneEdge(f"boundary graph has {delta.num_edges} edges")
    if (delta.genus, delta.n) != (stack.g, stack.n):
        raise BaseMismatch("boundary graph has the wrong signature")
    target = delta.digest

    def fn(s):
        g = s.graph
        terms = {}
        for k in range(g.num_edges):
            h, _ = contract_edges(g, [j for j in range(g.num_edges) if j != k])
            if h.digest == target:
                terms[edge_label(k)] = 1
        return Polynomial.linear(terms)

    return PPClass.from_function(stack, fn)


def edge_type_graph(g: int, n: int, left: Iterable[int], g_left: int = 0) -> StableGraph:
    """One-edge separating graph with legs ``left`` on a genus g_left vertex."""
    left = set(left)
    legs = tuple(0 if i in left else 1 for i in range(1, n + 1))
    return validate_graph(StableGraph((g_left, g - g_left), ((0, 1),), legs))


def exp_truncated(c: PPClass, max_deg: int) -> PPClass:
    """sum_{k <= max_deg} c^k / k!, for c with vanishing constant part."""
    for pw in c.data.values():
        for _, p in pw.pieces:
            if p.constant_term() != 0:
                raise NonNilpotentExp("exponential of a class with nonzero degree-0 part")
    out = PPClass.constant(c.stack, 1)
    power = PPClass.constant(c.stack, 1)
    for k in range(1, max_deg + 1):
        power = (power * c).truncate(max_deg)
        out = out + power.map(lambda p, k=k: p * Fraction(1, factorial(k)))
    return out.truncate(max_deg)


def dr_polynomial(g: int, n: int, a: Sequence[int], L: PPClass | None = None, P: PPClass | None = None) -> PPClass:
    """Degree-g part of exp(1/2 (-sum a_i^2 l_i - L)) * P on the pointed (g, n) stack.

    L and P default to 0 and 1.  When sum(a) != 0 the class is zero and a
    :class:`NonZeroSumWarning` is emitted.
    """
    stack = build_moduli(g, n)
    if len(a) != n:
        raise PPError(f"expected {n} weights, got {len(a)}")
    if sum(a) != 0:
        warnings.warn(f"weights {list(a)} do not sum to zero; the class is 0", NonZeroSumWarning, stacklevel=2)
        return PPClass.zero(stack)
    L = PPClass.zero(stack) if L is None else L
    P = PPClass.constant(stack, 1) if P is None else P
    if L.stack != stack or P.stack != stack:
        raise BaseMismatch("L and P must live on the pointed (g, n) stack")
    if not L.is_homogeneous(1):
        raise DegreeError("L must be homogeneous of degree 1")
    quad = PPClass.from_function(stack, lambda s: Polynomial.linear({leg_label(i + 1): x * x for i, x in enumerate(a)}))
    x = (quad + L).map(lambda p: p * Fraction(-1, 2))
    return (exp_truncated(x, g) * P).graded_part(g)


# ---------------------------------------------------------------------------
# pullback and products


def pullback(m: StackMorphism, c: PPClass) -> PPClass:
    if c.stack != m.target:
        raise BaseMismatch("class does not live on the morphism's target")
    out = {}
    for s in m.source:
        tkey, script = m.mapping[s.key]
        pw = c.data[tkey]
        subst = {t: Polynomial.linear(src) for t, src in script.items()}
        if pw.is_strict:
            out[s.key] = Piecewise.strict(s.labels, pw.pieces[0][1].substitute(subst))
            continue
        tlabels = m.target[tkey].labels
        refined = Subdivision(ConeComplex([pw.orthant()]), ConeComplex(pw.cones()))
        matrix = m.matrix(s.key)
        pieces = []
        for piece, _, tau in preimage_pieces(matrix, ConeComplex([s.cone()]), refined):
            poly = next(p for cone, p in pw.items() if cone.contains_cone(tau))
            pieces.append((piece, poly.substitute(subst)))
        assert tlabels == pw.labels
        out[s.key] = Piecewise(s.labels, tuple(pieces)).simplified()
    return PPClass(m.source, out)


def exterior_product(c1: PPClass, c2: PPClass) -> PPClass:
    """c1 ⊠ c2 on the product of the two stacks."""
    stack = product_stack(c1.stack, c2.stack)
    out = {}
    for s in stack:
        ka, kb = s.key.split("|")
        p1, p2 = c1.data[ka], c2.data[kb]
        d1, d2 = len(p1.labels), len(p2.labels)
        r1 = {x: "1." + x for x in p1.labels}
        r2 = {x: "2." + x for x in p2.labels}
        pieces = []
        for a, pa in p1.pieces:
            for b, pb in p2.pieces:
                if a is None and b is None:
                    cone = None
                else:
                    ca = a if a is not None else Cone.orthant(d1)
                    cb = b if b is not None else Cone.orthant(d2)
                    rays = [tuple(r) + (0,) * d2 for r in ca.rays] + [(0,) * d1 + tuple(r) for r in cb.rays]
                    cone = Cone(rays, d1 + d2, _trusted=True)
                pieces.append((cone, pa.rename(r1) * pb.rename(r2)))
        out[s.key] = Piecewise(s.labels, tuple(pieces)).simplified()
    return PPClass(stack, out)


def lift_to_pointed(c: PPClass) -> PPClass:
    """View a class on an unpointed stack as a class on the pointed one."""
    stack = c.stack
    if not isinstance(stack, ModuliConeStack) or stack.pointed:
        raise BaseMismatch("expected a class on an unpointed moduli stack")
    pointed = build_moduli(stack.g, stack.n, True)
    out = {}
    for s in pointed:
        pw = c.data[s.key]
        extra = len(s.labels) - len(pw.labels)
        pieces = []
        for cone, p in pw.pieces:
            if cone is not None:
                rays = [tuple(r) + (0,) * extra for r in cone.rays]
                rays += [tuple(int(i == j) for j in range(len(s.labels))) for i in range(len(pw.labels), len(s.labels))]
                cone = Cone(rays, len(s.labels), _trusted=True)
            pieces.append((cone, p))
        out[s.key] = Piecewise(s.labels, tuple(pieces))
    return PPClass(pointed, out)


# ---------------------------------------------------------------------------
# star subdivision of a moduli stack at a ray of one stratum


@dataclass
class StackSubdivision:
    """Per-stratum subdivisions induced by starring every copy of one ray."""

    stack: ModuliConeStack
    base_key: str
    ray: dict[str, int]
    subdivisions: dict[str, Subdivision]
    copies: dict[str, list[tuple[int, ...]]]

    def contains_ray(self, key: str) -> bool:
        return bool(self.copies[key])


def _ray_copies(stack: ModuliConeStack, base_key: str, ray: Mapping[str, int], key: str) -> list[tuple[int, ...]]:
    s = stack[key]
    base = stack[base_key]
    g = s.graph
    out = set()
    for mask in range(1 << g.num_edges):
        sub = [k for k in range(g.num_edges) if mask >> k & 1]
        h, corr = contract_edges(g, sub)
        hkey, relabel = canonical_labels(h)
        if hkey != base_key:
            continue
        to_base = {edge_label(k): relabel[edge_label(corr.edges[k])] for k in corr.edges}
        to_base.update({x: x for x in s.leg_labels})
        for perm in base.automorphisms():
            vec = tuple(ray.get(perm[to_base[lab]], 0) if lab in to_base else 0 for lab in s.labels)
            out.add(vec)
    return sorted(out)


def star_subdivide_stack(stack: ModuliConeStack, base_key: str, ray: Mapping[str, int]) -> StackSubdivision:
    """Star every stratum at all copies of ``ray`` (given on stratum ``base_key``).

    A copy lives on each stratum that degenerates to the base stratum, in the
    face where the contracted edges have length zero, for every identification.
    """
    base = stack[base_key]
    if set(ray) - set(base.labels) or not any(ray.values()) or any(v < 0 for v in ray.values()):
        raise PPError("ray must be a nonzero nonnegative vector on the base stratum")
    subs, copies = {}, {}
    for s in stack:
        vecs = _ray_copies(stack, base_key, ray, s.key)
        orth = ConeComplex([s.cone()])
        sub = Subdivision(orth, orth)
        for v in vecs:
            sub = star_subdivision(sub, v)
        subs[s.key] = sub
        copies[s.key] = vecs
    return StackSubdivision(stack, base_key, dict(ray), subs, copies)


def phi_class(sd: StackSubdivision) -> PPClass:
    """Piecewise-linear class equal to 1 on every copy of the ray and 0 on the other rays."""
    out = {}
    for s in sd.stack:
        sub = sd.subdivisions[s.key]
        ones = set(tuple(int(x) for x in v) for v in sd.copies[s.key])
        pieces = []
        for cone in sub.refined.maximal:
            form = linear_form_on(cone, [1 if r in ones else 0 for r in cone.rays])
            poly = Polynomial.linear({lab: c for lab, c in zip(s.labels, form) if c})
            pieces.append((cone if not sub.is_trivial() else None, poly))
        out[s.key] = Piecewise(s.labels, tuple(pieces)).simplified()
    return PPClass(sd.stack, out)


def vanishing_off_ray(sd: StackSubdivision, c: PPClass) -> list[str]:
    """Refined cones not containing a copy of the ray on which c is nonzero."""
    bad = []
    for s in sd.stack:
        pw = c.data[s.key]
        ones = set(sd.copies[s.key])
        for cone in sd.subdivisions[s.key].refined.cones:
            if ones & set(cone.rays):
                continue
            for piece, p in pw.items():
                if piece.contains_cone(cone) and not vanishes_on(p, s.labels, cone):
                    bad.append(f"{s.key[:12]}: {list(cone.rays)}")
                    break
    return bad


def point_from_rays(labels: Sequence[str], rays: Iterable[Sequence[int]]) -> dict[str, Fraction]:
    total = None
    for r in rays:
        total = list(r) if total is None else [a + b for a, b in zip(total, r)]
    return _vec_to_point(labels, total or [0] * len(labels))


__all__ = [
    "BaseMismatch",
    "DegreeError",
    "NonNilpotentExp",
    "NonZeroSumWarning",
    "NotOneEdge",
    "NotPointed",
    "PPClass",
    "PPReport",
    "Piecewise",
    "Violation",
    "boundary_class",
    "dr_polynomial",
    "edge_type_graph",
    "exp_truncated",
    "exterior_product",
    "length_class",
    "lift_to_pointed",
    "phi_class",
    "pullback",
    "star_subdivide_stack",
    "vanishing_off_ray",
]
