"""Brandt matrices, the weighted pairing and the Eisenstein eigensystem."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

from sympy import divisors

from ..exact.matrix import IntMatrix, RatMatrix
from .enumeration import lll_gram, short_vectors
from .ideals import IdealClassSet


@dataclass(frozen=True)
class BrandtMatrix:
    n: int
    matrix: IntMatrix


def norm_counts(classes: IdealClassSet, nmax: int) -> list[list[dict[int, int]]]:
    """e[i][j][n] = #{y in conj(I_j) I_i : nrd(y) = n nrd(I_i) nrd(I_j)} for 1 <= n <= nmax."""
    h = classes.h
    out = [[{} for _ in range(h)] for _ in range(h)]
    for i, I in enumerate(classes.reps):
        for j, J in enumerate(classes.reps):
            P = J.conjugate().times(I)
            t = 2 * I.norm * J.norm
            _, G = lll_gram(P.gram())
            counts = out[i][j]
            for _, val in short_vectors(G, nmax * t):
                n, rem = divmod(val, t)
                if rem:
                    raise ArithmeticError("norm not divisible by the lattice norm")
                counts[n] = counts.get(n, 0) + 1
    return out


def brandt_matrices(classes: IdealClassSet, nmax: int) -> dict[int, IntMatrix]:
    """B(n) for every 1 <= n <= nmax prime to p, from one enumeration per pair of classes."""
    e = norm_counts(classes, nmax)
    h = classes.h
    W = classes.weights
    p = classes.p
    result = {}
    for n in range(1, nmax + 1):
        if n % p == 0:
            continue
        rows = []
        for i in range(h):
            row = []
            for j in range(h):
                c = e[i][j].get(n, 0)
                if c % W[j]:
                    raise ArithmeticError(f"e_{i}{j}({n}) = {c} not divisible by W_{j} = {W[j]}")
                row.append(c // W[j])
            rows.append(row)
        result[n] = IntMatrix(rows)
    return result


def brandt_matrix(classes: IdealClassSet, n: int) -> BrandtMatrix:
    if n < 1:
        raise ValueError("n must be positive")
    if gcd(n, classes.p) != 1:
        raise ValueError(f"n = {n} is not prime to p = {classes.p}")
    return BrandtMatrix(n, brandt_matrices(classes, n)[n])


def neighbor_brandt(classes: IdealClassSet, r: int) -> IntMatrix:
    """B(r) for a prime r from explicit sublattice classification (counts per target class)."""
    h = classes.h
    rows = [[0] * h for _ in range(h)]
    for i, recs in enumerate(classes.neighbors(r)):
        for rec in recs:
            rows[i][rec.target] += 1
    return IntMatrix(rows)


def weighted_pairing(classes: IdealClassSet):
    """The lattice Z^h with Gram diag(1/W_i)."""
    from ..congruence import PairedLattice
    h = classes.h
    gram = RatMatrix.from_rows([[Fraction(int(i == j), classes.weights[i]) for j in range(h)] for i in range(h)])
    return PairedLattice(gram)


def divisor_sum_prime_to(n: int, p: int) -> int:
    return sum(d for d in divisors(n) if d % p)


def eisenstein_system(classes: IdealClassSet, labels: Iterable[int], matrices: dict[int, IntMatrix] | None = None):
    """The eigensystem r -> 1 + r of the constant function, checked against B(r)."""
    from ..level.eigen import EigenSystem
    labels = list(labels)
    if matrices is None:
        matrices = brandt_matrices(classes, max(labels)) if labels else {}
    ones = [1] * classes.h
    values = {}
    for r in labels:
        if classes.p % r == 0:
            raise ValueError("labels must be prime to p")
        image = matrices[r] @ ones
        if image != [1 + r] * classes.h:
            raise ArithmeticError(f"constant function is not an eigenvector of B({r})")
        values[r] = 1 + r
    return EigenSystem.exact(values)
