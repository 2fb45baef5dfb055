"""Dense linear algebra over the rationals on plain nested lists.

Matrices are lists of rows. Entries may be ints or Fractions; results are
Fractions unless stated otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = list
Rows = list


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    A = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} as a list of vectors."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    R, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(R, piv):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def left_nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {y : y A = 0}."""
    return nullspace(transpose(rows), len(rows))


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*rows)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(r, c)) for c in Bt] for r in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(r, x)) for r in A]


def vecmat(x: Sequence, A: Sequence[Sequence]) -> list:
    n = len(A[0]) if A else 0
    out = [0] * n
    for xi, row in zip(x, A):
        if xi:
            for j, a in enumerate(row):
                out[j] += xi * a
    return out


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of A x = b, or None when inconsistent."""
    ncols = len(A[0]) if A else 0
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, piv):
        x[pc] = row[ncols]
    return x


def solve_left(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of y A = b, or None."""
    return solve(transpose(A), b)


def inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def det(A: Sequence[Sequence]):
    """Determinant; exact Bareiss elimination for integer input, Fractions otherwise."""
    n = len(A)
    if n == 0:
        return 1
    if all(isinstance(x, int) for r in A for x in r):
        return _bareiss(A)
    M = [[Fraction(x) for x in r] for r in A]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def _bareiss(A: Sequence[Sequence[int]]) -> int:
    M = [list(r) for r in A]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def common_denominator(vec: Sequence) -> int:
    d = 1
    for x in vec:
        x = Fraction(x)
        d = d * x.denominator // gcd(d, x.denominator)
    return d


def primitive(vec: Sequence) -> list[int]:
    """Scale a nonzero rational vector to a primitive integer vector with positive leading entry."""
    d = common_denominator(vec)
    ints = [int(Fraction(x) * d) for x in vec]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        raise ValueError("zero vector")
    ints = [a // g for a in ints]
    lead = next(a for a in ints if a)
    return [-a for a in ints] if lead < 0 else ints


def content(vec: Sequence) -> Fraction:
    """The positive rational c with vec in c * Z^n primitive (gcd of entries as a rational)."""
    d = common_denominator(vec)
    g = 0
    for x in vec:
        g = gcd(g, int(Fraction(x) * d))
    return Fraction(g, d)
