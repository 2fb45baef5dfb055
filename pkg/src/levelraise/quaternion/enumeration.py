"""Exact lattice reduction and short-vector enumeration for positive definite integer Gram matrices."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence


def _gso(G):
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    r = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = Fraction(G[i][j])
            for k in range(j):
                s -= mu[j][k] * r[i][k]
            r[i][j] = s
            if j < i:
                mu[i][j] = s / B[j]
        B[i] = r[i][i]
    return mu, B


def lll_gram(G: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> tuple[list[list[int]], list[list[int]]]:
    """LLL-reduce a positive definite Gram matrix.

    Returns (U, G') with G' = U G U^T; the rows of U express the new basis in the old one.
    """
    n = len(G)
    G = [list(map(int, r)) for r in G]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def sub(k, j, q):  # b_k -= q b_j
        U[k] = [a - q * b for a, b in zip(U[k], U[j])]
        G[k] = [a - q * b for a, b in zip(G[k], G[j])]
        for row in G:
            row[k] -= q * row[j]

    def swap(k):
        U[k], U[k - 1] = U[k - 1], U[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]

    k = 1
    while k < n:
        mu, B = _gso(G)
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                sub(k, j, q)
                mu, B = _gso(G)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            swap(k)
            k = max(k - 1, 1)
    return U, G


def _decompose(G):
    """Q(x) = sum_i q[i][i] * (x_i + sum_{j>i} q[i][j] x_j)^2."""
    n = len(G)
    q = [[Fraction(G[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(G: Sequence[Sequence[int]], bound: int, stop_at: int | None = None) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (x, x^T G x) for every nonzero integer x with x^T G x <= bound.

    Coordinates are bounded from the exact rational decomposition of G; each
    candidate range is widened slightly and every vector is re-checked exactly.
    With ``stop_at`` set, only vectors of exactly that value are yielded.
    """
    n = len(G)
    q = _decompose(G)
    x = [0] * n
    Gi = [list(map(int, r)) for r in G]

    def rec(i: int, budget: Fraction):
        centre = Fraction(0)
        for j in range(i + 1, n):
            if x[j]:
                centre -= q[i][j] * x[j]
        s = budget / q[i][i]
        rad = isqrt(s.numerator // s.denominator) + 1
        c_floor = centre.numerator // centre.denominator
        for xi in range(c_floor - rad - 1, c_floor + rad + 3):
            d = xi - centre
            used = q[i][i] * d * d
            if used > budget:
                continue
            x[i] = xi
            if i == 0:
                yield tuple(x)
            else:
                yield from rec(i - 1, budget - used)
        x[i] = 0

    for v in rec(n - 1, Fraction(bound)):
        if not any(v):
            continue
        val = sum(v[a] * Gi[a][b] * v[b] for a in range(n) for b in range(n))
        if val > bound:
            continue
        if stop_at is not None and val != stop_at:
            continue
        yield v, val


def reduced(G: Sequence[Sequence[int]]):
    """(U, G') from LLL, for enumerating in a better-conditioned basis."""
    return lll_gram(G)
