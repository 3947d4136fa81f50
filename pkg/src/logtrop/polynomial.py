"""Sparse multivariate polynomials with exact rational coefficients.

Variables are coordinate labels such as ``"e0"`` (an edge length) or ``"l2"``
(the length of leg 2).  A monomial is a sorted tuple of ``(label, exponent)``
pairs; the empty tuple is the constant monomial.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Monomial = tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _term_key(mono: Monomial):
    return (sum(e for _, e in mono), mono)


class Polynomial:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                mono = tuple(sorted((v, e) for v, e in mono if e))
                clean[mono] = clean.get(mono, Fraction(0)) + c
        self._terms = {m: c for m, c in sorted(clean.items(), key=lambda t: _term_key(t[0])) if c}
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, label: str, coeff: Scalar = 1) -> "Polynomial":
        return cls({((label, 1),): coeff})

    @classmethod
    def linear(cls, coeffs: Mapping[str, Scalar], const: Scalar = 0) -> "Polynomial":
        terms = {((v, 1),): c for v, c in coeffs.items()}
        if const:
            terms[()] = const
        return cls(terms)

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> set[str]:
        return {v for mono in self._terms for v, _ in mono}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=-1)

    def degrees(self) -> set[int]:
        return {sum(e for _, e in m) for m in self._terms}

    def is_homogeneous(self, k: int) -> bool:
        return all(sum(e for _, e in m) == k for m in self._terms)

    def graded_part(self, k: int) -> "Polynomial":
        return Polynomial({m: c for m, c in self._terms.items() if sum(e for _, e in m) == k})

    def truncate(self, max_deg: int) -> "Polynomial":
        return Polynomial({m: c for m, c in self._terms.items() if sum(e for _, e in m) <= max_deg})

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def linear_coefficients(self) -> dict[str, Fraction]:
        return {m[0][0]: c for m, c in self._terms.items() if len(m) == 1 and m[0][1] == 1}

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        t = dict(self._terms)
        for m, c in other._terms.items():
            t[m] = t.get(m, 0) + c
        return Polynomial(t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        t: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Polynomial(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # substitution / evaluation
    def substitute(self, mapping: Mapping[str, "Polynomial"], keep_unmapped: bool = True) -> "Polynomial":
        """Replace variables by polynomials.

        Unmapped variables are kept as they are, or raise ``KeyError`` when
        ``keep_unmapped`` is false.
        """
        powers: dict[tuple[str, int], Polynomial] = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                if v in mapping:
                    base = _coerce(mapping[v])
                elif keep_unmapped:
                    base = Polynomial.var(v)
                else:
                    raise KeyError(v)
                powers[key] = base ** e
            return powers[key]

        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            piece = Polynomial.constant(c)
            for v, e in mono:
                piece = piece * power(v, e)
            for m, cc in piece._terms.items():
                out[m] = out.get(m, 0) + cc
        return Polynomial(out)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        return Polynomial({tuple((mapping.get(v, v), e) for v, e in m): c for m, c in self._terms.items()})

    def set_zero(self, labels: Iterable[str]) -> "Polynomial":
        labels = set(labels)
        return Polynomial({m: c for m, c in self._terms.items() if not any(v in labels for v, _ in m)})

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        total = Fraction(0)
        for mono, c in self._terms.items():
            val = c
            for v, e in mono:
                val *= Fraction(point.get(v, 0)) ** e
            total += val
        return total

    # formatting
    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self._terms.items():
            m = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        return [[{v: e for v, e in mono}, str(c)] for mono, c in self._terms.items()]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        if isinstance(data, (int, str)):
            return cls.constant(Fraction(data))
        return cls({tuple(sorted((v, int(e)) for v, e in mono.items())): Fraction(c) for mono, c in data})


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


ZERO = Polynomial()
ONE = Polynomial.constant(1)
