"""Characteristic polynomials and polynomial factorization.

Integer polynomials are dense coefficient lists, highest degree first (the
convention of sympy's galoistools, which does the factoring over F_ell).
"""

from __future__ import annotations

from typing import Sequence

from sympy import ZZ, Poly, factor_list, symbols
from sympy.polys.galoistools import gf_factor, gf_from_int_poly

_x = symbols("x")


def char_poly(m, zero=0, one=1) -> list:
    """Coefficients of det(x*I - m), highest first, via division-free Berkowitz.

    Works over any commutative ring whose elements support +, -, *; pass the
    ring's zero and one for non-integer entries.
    """
    A = m.rows if hasattr(m, "rows") and not isinstance(m, list) else m
    n = len(A)
    if n == 0:
        return [one]
    v = [one, zero - A[0][0]]
    for r in range(1, n):
        R = A[r][:r]
        C = [A[i][r] for i in range(r)]
        T = [one, zero - A[r][r]]
        vec = C
        for _ in range(r):
            s = zero
            for a, b in zip(R, vec):
                s = s + a * b
            T.append(zero - s)
            vec = [_dot(A[i][:r], vec, zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            s = zero
            for j in range(min(i, r) + 1):
                s = s + T[i - j] * v[j]
            new.append(s)
        v = new
    return v


def _dot(a, b, zero):
    s = zero
    for x, y in zip(a, b):
        s = s + x * y
    return s


def poly_at_matrix(coeffs: Sequence[int], m, modulus: int | None = None) -> list[list[int]]:
    """Evaluate an integer polynomial (highest first) at a square integer matrix (Horner)."""
    A = m.rows if hasattr(m, "rows") else m
    n = len(A)
    acc = [[0] * n for _ in range(n)]
    for c in coeffs:
        acc = [[sum(acc[i][k] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            acc[i][i] += c
        if modulus:
            acc = [[x % modulus for x in row] for row in acc]
    return acc


def factor_mod(coeffs: Sequence[int], ell: int) -> list[tuple[list[int], int]]:
    """Monic irreducible factors over F_ell with multiplicities, sorted by (degree, coefficients)."""
    f = gf_from_int_poly([int(c) for c in coeffs], ell)
    _, facs = gf_factor(f, ell, ZZ)
    out = [([int(c) % ell for c in g], e) for g, e in facs]
    return sorted(out, key=lambda t: (len(t[0]), t[0]))


def factor_rational(coeffs: Sequence[int]) -> list[tuple[list[int], int]]:
    """Irreducible factors over Q (primitive integer, positive leading coefficient), sorted."""
    p = Poly([int(c) for c in coeffs], _x, domain=ZZ)
    _, facs = factor_list(p)
    out = []
    for g, e in facs:
        c = [int(a) for a in g.all_coeffs()]
        if c[0] < 0:
            c = [-a for a in c]
        out.append((c, e))
    return sorted(out, key=lambda t: (len(t[0]), t[0]))


def integer_roots(coeffs: Sequence[int]) -> list[int]:
    return sorted(-g[1] // g[0] for g, _ in factor_rational(coeffs) if len(g) == 2 and g[1] % g[0] == 0)
