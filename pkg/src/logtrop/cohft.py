"""Executable checks of the gluing axioms for systems of piecewise-polynomial classes.

A :class:`CohFTSpec` assigns a class on the pointed (g, n) stack to every
tuple of basis labels.  Each checker computes both sides of an axiom through
independent code paths (pullback engine vs. pairing sum of exterior
products) and compares them exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Mapping, Sequence

from .moduli import (
    build_moduli,
    forgetful_morphism,
    gluing_morphism,
    leg_permutation_morphism,
    loop_gluing_morphism,
)
from .polynomial import Polynomial
from .pp import PPClass, dr_polynomial, exterior_product, pullback


class CohFTError(Exception):
    pass


class EnvelopeExceeded(CohFTError):
    pass


class NoUnitDeclared(CohFTError):
    pass


@dataclass(frozen=True)
class Envelope:
    max_g: int
    max_n: int

    def contains(self, g: int, n: int) -> bool:
        return 0 <= g <= self.max_g and 0 <= n <= self.max_n and 2 * g - 2 + n > 0

    def signatures(self) -> list[tuple[int, int]]:
        return [(g, n) for g in range(self.max_g + 1) for n in range(self.max_n + 1) if 2 * g - 2 + n > 0]

    @classmethod
    def parse(cls, text: str) -> "Envelope":
        """Parse ``"g<=1,n<=4"``."""
        bounds = {}
        for part in text.replace(" ", "").split(","):
            name, _, value = part.partition("<=")
            if name not in ("g", "n") or not value.isdigit():
                raise CohFTError(f"cannot parse envelope {text!r}")
            bounds[name] = int(value)
        if set(bounds) != {"g", "n"}:
            raise CohFTError(f"envelope needs bounds on g and n: {text!r}")
        return cls(bounds["g"], bounds["n"])

    def __str__(self):
        return f"g<={self.max_g},n<={self.max_n}"


@dataclass
class CohFTSpec:
    """Basis, pairing and class assignment.

    ``window`` marks an integer-labelled basis that is really infinite: only
    labels in ``basis`` are examined, and ``decay`` (currently ``"sum_zero"``:
    classes vanish unless the labels sum to zero) says which classes are known
    to vanish outside it.
    """

    basis: tuple[Hashable, ...]
    eta: Mapping[tuple, Fraction]
    eta_inv: Mapping[tuple, Fraction]
    rule: Callable[[int, int, tuple], PPClass]
    unit: Hashable | None = None
    window: int | None = None
    decay: str | None = None
    name: str = "spec"

    def omega(self, g: int, n: int, inputs: Sequence) -> PPClass:
        inputs = tuple(inputs)
        if len(inputs) != n:
            raise CohFTError(f"expected {n} inputs, got {len(inputs)}")
        if self.known_zero(inputs):
            return PPClass.zero(build_moduli(g, n))
        return self._cached(g, n, inputs)

    @lru_cache(maxsize=None)
    def _cached(self, g, n, inputs):
        return self.rule(g, n, inputs)

    __hash__ = object.__hash__

    def known_zero(self, inputs: Sequence) -> bool:
        return self.decay == "sum_zero" and sum(inputs) != 0

    def eta_value(self, i, j) -> Fraction:
        return Fraction(self.eta.get((i, j), 0))

    def eta_inv_value(self, i, j) -> Fraction:
        return Fraction(self.eta_inv.get((i, j), 0))

    def pairing_problems(self) -> list[str]:
        out = []
        for (i, j), v in self.eta.items():
            if Fraction(self.eta.get((j, i), 0)) != Fraction(v):
                out.append(f"eta not symmetric at ({i}, {j})")
        for i in self.basis:
            for k in self.basis:
                total = sum(self.eta_value(i, j) * self.eta_inv_value(j, k) for j in self.basis)
                if total != (1 if i == k else 0):
                    out.append(f"eta * eta_inv != identity at ({i}, {k})")
        return out

    # dual pairs for the gluing sums
    def dual_pairs(self, basis: Sequence | None = None) -> list[tuple[Hashable, Hashable, Fraction]]:
        basis = self.basis if basis is None else basis
        return [(i, j, self.eta_inv_value(i, j)) for i in basis for j in basis if self.eta_inv_value(i, j)]

    def widened(self, window: int) -> "CohFTSpec":
        """The same rule on a larger integer window (for finiteness probes)."""
        if self.window is None:
            return self
        basis = tuple(range(-window, window + 1))
        return CohFTSpec(basis, _delta_pairing(basis), _delta_pairing(basis), self.rule, self.unit, window, self.decay, self.name)


def _delta_pairing(basis) -> dict:
    return {(a, -a): Fraction(1) for a in basis if -a in basis}


def constant_spec(value=1, basis: Sequence = (0,), unit: Hashable | None = 0) -> CohFTSpec:
    basis = tuple(basis)
    eta = {(b, b): Fraction(1) for b in basis}
    return CohFTSpec(
        basis, eta, dict(eta), lambda g, n, v: PPClass.constant(build_moduli(g, n), value), unit, name="constant"
    )


def table_spec(
    entries: Mapping[tuple, PPClass],
    basis: Sequence = (0,),
    eta: Mapping | None = None,
    eta_inv: Mapping | None = None,
    unit: Hashable | None = None,
) -> CohFTSpec:
    """Classes looked up in ``entries`` keyed by (g, n, inputs)."""
    basis = tuple(basis)
    eta = eta or {(b, b): Fraction(1) for b in basis}
    eta_inv = eta_inv or dict(eta)

    def rule(g, n, v):
        try:
            return entries[(g, n, tuple(v))]
        except KeyError:
            raise EnvelopeExceeded(f"no table entry for (g, n) = ({g}, {n}) and inputs {list(v)}") from None

    return CohFTSpec(basis, eta, eta_inv, rule, unit, name="table")


def dr_spec(window: int = 3, L: Mapping[tuple, PPClass] | None = None, P: Mapping[tuple, PPClass] | None = None) -> CohFTSpec:
    """The degree-g DR-formula shape with pluggable L and P (defaults 0 and 1)."""
    L = L or {}
    P = P or {}
    basis = tuple(range(-window, window + 1))
    pairing = _delta_pairing(basis)

    def rule(g, n, v):
        return dr_polynomial(g, n, list(v), L.get((g, n)), P.get((g, n)))

    return CohFTSpec(basis, pairing, dict(pairing), rule, unit=0, window=window, decay="sum_zero", name="dr")


# ---------------------------------------------------------------------------
# reports


@dataclass
class AxiomReport:
    axiom: str
    instance: str
    inputs: list = field(default_factory=list)
    verdict: str = "pass"
    witnesses: list = field(default_factory=list)
    note: str = ""
    summands: int | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def fail(self, verdict: str, witness: dict):
        if self.verdict == "pass":
            self.verdict = verdict
        self.witnesses.append(witness)

    def to_json(self) -> dict:
        out = {
            "axiom": self.axiom,
            "instance": self.instance,
            "inputs": [list(v) for v in self.inputs],
            "passed": self.passed,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "note": self.note,
        }
        if self.summands is not None:
            out["summands"] = self.summands
        return out


def _witness(diff: PPClass, inputs, extra: str = "") -> dict | None:
    for key in diff.stack.strata:
        pw = diff.data[key]
        for cone, p in pw.pieces:
            if not p.is_zero():
                w = {"inputs": list(inputs), "stratum": key, "difference": p.to_json(), "text": str(p)}
                if cone is not None:
                    w["cone"] = [list(r) for r in cone.rays]
                if extra:
                    w["detail"] = extra
                return w
    return None


WINDOW_NOTE = "finiteness is certified only on the declared basis window"


def _all_inputs(spec: CohFTSpec, n: int, inputs) -> list[tuple]:
    if inputs is not None:
        return [tuple(v) for v in inputs]
    return list(itertools.product(spec.basis, repeat=n))


# ---------------------------------------------------------------------------
# axioms


def check_sn_equivariance(spec: CohFTSpec, g: int, n: int, inputs=None, envelope: Envelope | None = None) -> AxiomReport:
    if envelope is not None and not envelope.contains(g, n):
        raise EnvelopeExceeded(f"({g}, {n}) outside {envelope}")
    tested = _all_inputs(spec, n, inputs)
    report = AxiomReport("sn", f"({g},{n})", tested)
    for i in range(1, n):
        perm = list(range(1, n + 1))
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
        m = leg_permutation_morphism(g, n, perm)
        for v in tested:
            w = list(v)
            w[i - 1], w[i] = w[i], w[i - 1]
            diff = spec.omega(g, n, w) - pullback(m, spec.omega(g, n, v))
            if not diff.is_zero():
                report.fail("fail", _witness(diff, v, f"transposition ({i} {i + 1})"))
    return report


def _pair_sum(spec: CohFTSpec, left: Callable, right: Callable, product_stack_ref) -> tuple[PPClass | None, int, list]:
    """Sum over dual pairs of left(i) ⊠ right(j).

    Pairs whose factors are known to vanish are skipped; the count returned
    is the number of pairs that survive that filter.
    """
    total = None
    summands = 0
    used = []
    for i, j, c in spec.dual_pairs():
        a = left(i)
        if a is None:
            continue
        b = right(j)
        if b is None:
            continue
        summands += 1
        used.append((i, j))
        term = exterior_product(a, b).map(lambda p, c=c: p * c)
        if term.is_zero():
            continue
        total = term if total is None else total + term
    if total is None:
        total = PPClass.zero(product_stack_ref)
    return total, summands, used


def _finiteness(spec: CohFTSpec, admissible: Callable[[CohFTSpec], int]) -> str:
    """'finite', 'window-too-small' or 'infinite-sum' for integer windows."""
    if spec.window is None:
        return "finite"
    w = spec.window
    c0 = admissible(spec)
    c1 = admissible(spec.widened(3 * w + 3))
    if c1 == c0:
        return "finite"
    c2 = admissible(spec.widened(9 * w + 9))
    return "infinite-sum" if c2 > c1 else "window-too-small"


def check_separating_gluing(
    spec: CohFTSpec, g1: int, n1: int, g2: int, n2: int, inputs=None, first_legs=None, envelope: Envelope | None = None
) -> AxiomReport:
    g, n = g1 + g2, n1 + n2
    if envelope is not None and not all(envelope.contains(*s) for s in [(g, n), (g1, n1 + 1), (g2, n2 + 1)]):
        raise EnvelopeExceeded(f"gluing ({g1},{n1 + 1}) x ({g2},{n2 + 1}) -> ({g},{n}) outside {envelope}")
    m = gluing_morphism(g1, n1, g2, n2, first_legs)
    first = sorted(first_legs) if first_legs else list(range(1, n1 + 1))
    rest = [i for i in range(1, n + 1) if i not in first]
    tested = _all_inputs(spec, n, inputs)
    report = AxiomReport("sep", m.name, tested, note=WINDOW_NOTE if spec.window is not None else "")
    max_summands = 0
    for v in tested:
        vi = tuple(v[i - 1] for i in first)
        vj = tuple(v[i - 1] for i in rest)

        def admissible(sp, vi=vi, vj=vj):
            return sum(1 for i, j, _ in sp.dual_pairs() if not sp.known_zero(vi + (i,)) and not sp.known_zero(vj + (j,)))

        status = _finiteness(spec, admissible)
        lhs = pullback(m, spec.omega(g, n, v))
        rhs, count, used = _pair_sum(
            spec,
            lambda i: None if spec.known_zero(vi + (i,)) else spec.omega(g1, n1 + 1, vi + (i,)),
            lambda j: None if spec.known_zero(vj + (j,)) else spec.omega(g2, n2 + 1, vj + (j,)),
            m.source,
        )
        max_summands = max(max_summands, count)
        if status != "finite":
            diff = lhs - rhs
            report.fail(status, _witness(diff, v, "windowed sum") or {"inputs": list(v), "detail": status})
            continue
        diff = lhs - rhs
        if not diff.is_zero():
            report.fail("fail", _witness(diff, v, f"pairs used {used}"))
    report.summands = max_summands
    return report


def check_loop_axiom(spec: CohFTSpec, g: int, n: int, inputs=None, envelope: Envelope | None = None) -> AxiomReport:
    if g < 1:
        raise CohFTError("the loop axiom needs g >= 1")
    if envelope is not None and not envelope.contains(g, n):
        raise EnvelopeExceeded(f"({g}, {n}) outside {envelope}")
    m = loop_gluing_morphism(g, n)
    tested = _all_inputs(spec, n, inputs)
    report = AxiomReport("loop", m.name, tested, note=WINDOW_NOTE if spec.window is not None else "")
    max_summands = 0
    for v in tested:
        v = tuple(v)

        def admissible(sp, v=v):
            return sum(1 for i, j, _ in sp.dual_pairs() if not sp.known_zero(v + (i, j)))

        status = _finiteness(spec, admissible)
        lhs = pullback(m, spec.omega(g, n, v))
        rhs = PPClass.zero(m.source)
        count = 0
        for i, j, c in spec.dual_pairs():
            if spec.known_zero(v + (i, j)):
                continue
            count += 1
            term = spec.omega(g - 1, n + 2, v + (i, j))
            if not term.is_zero():
                rhs = rhs + term.map(lambda p, c=c: p * c)
        max_summands = max(max_summands, count)
        diff = lhs - rhs
        if status != "finite":
            report.fail(status, _witness(diff, v, "windowed sum") or {"inputs": list(v), "detail": status})
        elif not diff.is_zero():
            report.fail("fail", _witness(diff, v))
    report.summands = max_summands
    return report


def check_unit_axioms(spec: CohFTSpec, envelope: Envelope, inputs_per_n: Mapping[int, list] | None = None) -> AxiomReport:
    """Forgetting a unit input is pulling back, and Omega_{0,3}(v1, v2, 1) = eta(v1, v2)."""
    if spec.unit is None:
        raise NoUnitDeclared("the spec declares no unit")
    report = AxiomReport("unit", str(envelope))
    for g, n1 in envelope.signatures():
        n = n1 - 1
        if n < 0 or 2 * g - 2 + n <= 0:
            continue
        m = forgetful_morphism(g, n)
        tested = inputs_per_n.get(n) if inputs_per_n else None
        for v in _all_inputs(spec, n, tested):
            report.inputs.append(list(v) + [spec.unit])
            diff = spec.omega(g, n + 1, tuple(v) + (spec.unit,)) - pullback(m, spec.omega(g, n, v))
            if not diff.is_zero():
                report.fail("fail", _witness(diff, v, f"forgetting the unit on ({g},{n + 1})"))
    stack = build_moduli(0, 3)
    for a in spec.basis:
        for b in spec.basis:
            want = PPClass.constant(stack, spec.eta_value(a, b))
            diff = spec.omega(0, 3, (a, b, spec.unit)) - want
            if not diff.is_zero():
                report.fail("fail", _witness(diff, (a, b, spec.unit), "three-point normalisation"))
    return report


def separating_gluings(g: int, n: int):
    """All (g1, n1, g2, n2, first_legs) with stable factors gluing to (g, n)."""
    out = []
    for g1 in range(g + 1):
        g2 = g - g1
        for size in range(n + 1):
            for first in itertools.combinations(range(1, n + 1), size):
                n1, n2 = size, n - size
                if 2 * g1 - 2 + n1 + 1 > 0 and 2 * g2 - 2 + n2 + 1 > 0:
                    out.append((g1, n1, g2, n2, list(first)))
    return out


def check_minimality(c: PPClass) -> AxiomReport:
    """Passes iff c pulls back to zero along every gluing map into its stack."""
    stack = c.stack
    g, n = stack.g, stack.n
    report = AxiomReport("minimality", f"({g},{n})")
    for g1, n1, g2, n2, first in separating_gluings(g, n):
        m = gluing_morphism(g1, n1, g2, n2, first)
        pulled = pullback(m, c)
        if not pulled.is_zero():
            report.fail("fail", _witness(pulled, [], m.name))
    if g >= 1:
        m = loop_gluing_morphism(g, n)
        pulled = pullback(m, c)
        if not pulled.is_zero():
            report.fail("fail", _witness(pulled, [], m.name))
    return report


def run_checks(spec: CohFTSpec, axioms: Sequence[str], envelope: Envelope) -> list[AxiomReport]:
    """Every requested axiom on every instance inside the envelope."""
    reports = []
    sigs = envelope.signatures()
    for ax in axioms:
        if ax == "sn":
            reports += [check_sn_equivariance(spec, g, n) for g, n in sigs if n >= 2]
        elif ax == "sep":
            for g, n in sigs:
                for g1, n1, g2, n2, first in separating_gluings(g, n):
                    if envelope.contains(g1, n1 + 1) and envelope.contains(g2, n2 + 1):
                        reports.append(check_separating_gluing(spec, g1, n1, g2, n2, first_legs=first))
        elif ax == "loop":
            reports += [check_loop_axiom(spec, g, n) for g, n in sigs if g >= 1]
        elif ax == "unit":
            reports.append(check_unit_axioms(spec, envelope))
        else:
            raise CohFTError(f"unknown axiom {ax!r}")
    return reports


# ---------------------------------------------------------------------------
# JSON specs


def _class_from_entry(g: int, n: int, entry: Mapping) -> PPClass:
    stack = build_moduli(g, n)
    if "class" in entry:
        c = PPClass.from_json(entry["class"])
        if c.stack != stack:
            raise CohFTError(f"table entry for ({g},{n}) lives on the wrong stack")
        return c
    poly = Polynomial.from_json(entry["poly"])
    return PPClass.from_function(stack, lambda s: poly)


def spec_from_json(data: Mapping, load: Callable[[str], Mapping] | None = None) -> CohFTSpec:
    """Build a spec from its JSON form.

    Kinds: ``constant`` (``value``, ``basis``, ``unit``), ``table``
    (``basis``, ``eta`` as [i, j, value] triples, ``unit``, ``entries`` with
    ``g``, ``n``, ``inputs`` and either ``poly`` (same polynomial on every
    stratum) or ``class``), and ``dr`` (``window``, optional ``L``/``P``
    lists of {g, n, class or file}).
    """
    kind = data.get("kind")
    if kind == "constant":
        return constant_spec(Fraction(str(data.get("value", 1))), data.get("basis", [0]), data.get("unit", 0))
    if kind == "table":
        basis = tuple(data.get("basis", [0]))
        eta = {(i, j): Fraction(str(v)) for i, j, v in data.get("eta", [[b, b, 1] for b in basis])}
        eta_inv = {(i, j): Fraction(str(v)) for i, j, v in data.get("eta_inv", [[i, j, v] for (i, j), v in eta.items()])}
        entries = {}
        for e in data["entries"]:
            g, n = int(e["g"]), int(e["n"])
            entries[(g, n, tuple(e["inputs"]))] = _class_from_entry(g, n, e)
        return table_spec(entries, basis, eta, eta_inv, data.get("unit"))
    if kind == "dr":
        extra = {}
        for name in ("L", "P"):
            table = {}
            for e in data.get(name, []):
                src = e
                if "file" in e:
                    if load is None:
                        raise CohFTError("file references need a loader")
                    src = {"class": load(e["file"])}
                table[(int(e["g"]), int(e["n"]))] = _class_from_entry(int(e["g"]), int(e["n"]), src)
            extra[name] = table
        return dr_spec(int(data.get("window", 3)), extra["L"], extra["P"])
    raise CohFTError(f"unknown spec kind {kind!r}")
