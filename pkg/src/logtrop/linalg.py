"""Exact linear algebra over the rationals and the integers.

Matrices are plain lists of rows.  Entries are ``int`` or ``Fraction``; nothing
here ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Vector = Sequence
Matrix = Sequence[Sequence]


def dot(u: Vector, v: Vector):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Vector) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    if any(isinstance(x, Fraction) for x in v):
        den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in v), 1)
        v = [int(Fraction(x) * den) for x in v]
    g = reduce(gcd, (abs(int(x)) for x in v), 0)
    if g == 0:
        return tuple(0 for _ in v)
    return tuple(int(x) // g for x in v)


def rref(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : rows @ x = 0}."""
    if not rows:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(rows: Matrix, rhs: Vector) -> list[Fraction] | None:
    """One solution of rows @ x = rhs, or None when inconsistent."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def det(rows: Matrix):
    """Determinant by fraction-free Bareiss elimination (exact for ints)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                val = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = val // prev if all(isinstance(x, int) for x in (val, prev)) else Fraction(val) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def hermite_normal_form(rows: Matrix) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix (zero rows dropped).

    The rows of the result form a basis of the lattice spanned by ``rows``.
    """
    m = [[int(x) for x in r] for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    out_row = 0
    for c in range(ncols):
        # gcd-reduce column c among rows out_row..end
        while True:
            nz = [i for i in range(out_row, len(m)) if m[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(m[i][c]))
            m[out_row], m[piv] = m[piv], m[out_row]
            done = True
            for i in range(out_row + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[out_row][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[out_row])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if out_row < len(m) and m[out_row][c] != 0:
            if m[out_row][c] < 0:
                m[out_row] = [-x for x in m[out_row]]
            for i in range(out_row):
                q = m[i][c] // m[out_row][c]
                m[i] = [a - q * b for a, b in zip(m[i], m[out_row])]
            out_row += 1
            if out_row == len(m):
                break
    return [r for r in m if any(r)]


def in_lattice(basis_hnf: Matrix, v: Vector) -> bool:
    """Membership of an integer vector in the lattice with the given HNF basis."""
    v = [int(x) for x in v]
    for row in basis_hnf:
        c = next(i for i, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def lattice_index(rows: Matrix) -> int:
    """Index of the lattice spanned by ``rows`` inside its saturation.

    Equals the gcd of the maximal minors of the row space; 1 means the rows
    extend to a basis of the ambient lattice.
    """
    h = hermite_normal_form(rows)
    r = len(h)
    if r == 0:
        return 1
    ncols = len(h[0])
    # gcd of all r x r minors of an HNF basis
    from itertools import combinations

    g = 0
    for cols in combinations(range(ncols), r):
        g = gcd(g, abs(int(det([[row[c] for c in cols] for row in h]))))
        if g == 1:
            return 1
    return g


class EchelonSpan:
    """Incrementally built row space that remembers how each row was made.

    Rows are stored sparsely with a leading 1 at the pivot and zeros before
    it.  ``reduce`` returns the remainder of a vector together with its
    coefficients on the generators added so far.
    """

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}
        self.combos: dict[int, dict[int, Fraction]] = {}
        self.count = 0

    def reduce(self, vec: Vector) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
        v = {i: Fraction(x) for i, x in enumerate(vec) if x}
        used: dict[int, Fraction] = {}
        for p in sorted(self.rows):
            c = v.get(p)
            if not c:
                continue
            for i, x in self.rows[p].items():
                y = v.get(i, 0) - c * x
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
            for g, x in self.combos[p].items():
                used[g] = used.get(g, 0) + c * x
        return v, {g: x for g, x in used.items() if x}

    def add(self, vec: Vector) -> bool:
        """Add a generator; True when it enlarged the span."""
        index = self.count
        self.count += 1
        rem, used = self.reduce(vec)
        if not rem:
            return False
        p = min(rem)
        inv = 1 / rem[p]
        combo = {g: -x * inv for g, x in used.items()}
        combo[index] = combo.get(index, 0) + inv
        self.rows[p] = {i: x * inv for i, x in rem.items()}
        self.combos[p] = combo
        return True

    def __len__(self):
        return len(self.rows)
