"""Smith and Hermite normal forms and the lattice operations built on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import common_denominator
from .matrix import IntMatrix


@dataclass(frozen=True)
class SmithForm:
    """U @ m @ V == D, with D diagonal and each invariant factor dividing the next.

    ``factors`` lists the nonzero diagonal entries; ``Vinv`` is the inverse of V.
    """

    factors: tuple[int, ...]
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    Vinv: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.factors)


def smith_normal_form(m) -> SmithForm:
    """Smith normal form with unimodular transforms.

    Pivots are the smallest nonzero absolute value in the active block, ties
    broken row-major.
    """
    m = m if isinstance(m, IntMatrix) else IntMatrix(m)
    r, c = m.shape
    A = m.tolist()
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]
    Vi = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in A:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]
        Vi[src] = [a - f * b for a, b in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            clean = True
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    clean = clean and A[t][j] == 0
            if clean:
                bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                            if A[i][j] % A[t][t]), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            best = None
            for i in range(t, r):
                if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                    best = (abs(A[i][t]), i, t)
            for j in range(t, c):
                if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    factors = tuple(A[i][i] for i in range(min(r, c)) if A[i][i])
    return SmithForm(factors, IntMatrix(A, c), IntMatrix(U, r), IntMatrix(V, c), IntMatrix(Vi, c))


def invariant_factors(m) -> tuple[int, ...]:
    return smith_normal_form(m).factors


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Row Hermite normal form of the Z-span of integer rows (zero rows dropped).

    Pivots are positive and entries above each pivot are reduced into [0, pivot).
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    row = 0
    for col in range(ncols):
        if row == len(A):
            break
        while True:
            nz = [i for i in range(row, len(A)) if A[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(A[i][col]), i))
            A[row], A[i0] = A[i0], A[row]
            done = True
            for i in range(row + 1, len(A)):
                if A[i][col]:
                    f = A[i][col] // A[row][col]
                    A[i] = [a - f * b for a, b in zip(A[i], A[row])]
                    done = done and A[i][col] == 0
            if done:
                break
        if A[row][col] == 0:
            continue
        if A[row][col] < 0:
            A[row] = [-a for a in A[row]]
        p = A[row][col]
        for i in range(row):
            f = A[i][col] // p
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
        row += 1
    return A[:row]


def integer_kernel(m) -> list[list[int]]:
    """Z-basis of {x in Z^n : m x = 0}."""
    m = m if isinstance(m, IntMatrix) else IntMatrix(m)
    s = smith_normal_form(m)
    cols = s.V.transpose().rows
    return [list(cols[j]) for j in range(s.rank, m.ncols)]


def integer_left_kernel(m) -> list[list[int]]:
    """Z-basis of {y in Z^r : y m = 0}."""
    m = m if isinstance(m, IntMatrix) else IntMatrix(m)
    return integer_kernel(m.transpose())


def saturate(basis: Sequence[Sequence], n: int | None = None) -> list[list[int]]:
    """Basis of (Q-span of the given vectors) intersected with Z^n, in Hermite form."""
    rows = [list(r) for r in basis if any(r)]
    if not rows:
        return []
    if n is None:
        n = len(rows[0])
    ints = []
    for r in rows:
        d = common_denominator(r)
        ints.append([int(Fraction(x) * d) for x in r])
    s = smith_normal_form(ints)
    return hnf([list(s.Vinv.rows[i]) for i in range(s.rank)], n)


def lattice_sum(*bases: Sequence[Sequence[int]]) -> list[list[int]]:
    rows = [list(r) for b in bases for r in b]
    n = len(rows[0]) if rows else 0
    return hnf(rows, n)


def lattice_intersection(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    """Hermite basis of the intersection of two integer lattices given by row bases."""
    if not A or not B:
        return []
    n = len(A[0])
    stacked = [list(r) for r in A] + [[-x for x in r] for r in B]
    ker = integer_left_kernel(stacked)
    k = len(A)
    vecs = []
    for y in ker:
        v = [0] * n
        for coef, row in zip(y[:k], A):
            if coef:
                for j in range(n):
                    v[j] += coef * row[j]
        vecs.append(v)
    return hnf(vecs, n)


def rational_lattice_basis(rows: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    """Write the Z-span of rational rows as (integer Hermite basis, denominator d): span = basis / d."""
    d = 1
    for r in rows:
        c = common_denominator(r)
        d = d * c // _gcd(d, c)
    ints = [[int(Fraction(x) * d) for x in r] for r in rows]
    n = len(rows[0]) if rows else 0
    return hnf(ints, n), d


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def index_in(sub: Sequence[Sequence[int]], ambient: Sequence[Sequence[int]]) -> int:
    """Index [ambient : sub] for full-rank lattices in the same space (|det ratio|)."""
    from .linalg import det
    return abs(int(Fraction(det(sub)) / Fraction(det(ambient))))
