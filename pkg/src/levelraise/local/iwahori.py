"""The rank-one Iwahori-Hecke algebra of unramified U(3) and the unipotent relation that detects reducibility.

The algebra has generators T, T' with (T + 1)(T - q^3) = 0 and (T' + 1)(T' - q) = 0.
The Iwahori-fixed vectors of an unramified principal series form a 2-dimensional module
on which TT' has eigenvalues q^2 a and q^2 / a.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

Mat2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

CHARACTER_NAMES = ("trivial", "steinberg", "pi_x", "pi_plus")


def characters(q: int) -> dict[str, tuple[int, int]]:
    """One-dimensional modules as values (T, T')."""
    return {"trivial": (q ** 3, q), "steinberg": (-1, -1), "pi_x": (q ** 3, -1), "pi_plus": (-1, q)}


def relations_hold(q: int, t: int | Fraction, tp: int | Fraction) -> bool:
    return (t + 1) * (t - q ** 3) == 0 and (tp + 1) * (tp - q) == 0


def iwahori_rank1_characters(q: int) -> dict[str, dict]:
    """Each character with its (T_K, T_K') = (1 + T, 1 + T') values and a relation check."""
    if q < 2:
        raise ValueError("q must be at least 2")
    out = {}
    for name, (t, tp) in characters(q).items():
        out[name] = {"T": t, "T'": tp, "T_K": 1 + t, "T_K'": 1 + tp, "relations": relations_hold(q, t, tp)}
    return out


def _mm(A: Mat2, B: Mat2) -> Mat2:
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def principal_series_module(q: int, a: Fraction | int) -> tuple[Mat2, Mat2]:
    """T and T' on the Iwahori-fixed vectors, with TT' of trace q^2 (a + 1/a) and determinant q^4."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    y = q * q * (a + 1 / a) + q ** 3 + q
    T = ((Fraction(q ** 3), Fraction(1)), (Fraction(0), Fraction(-1)))
    Tp = ((Fraction(-1), Fraction(0)), (y, Fraction(q)))
    return T, Tp


def _quadratic_zero(M: Mat2, r1: int, r2: int) -> bool:
    n = len(M)
    one = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    A = tuple(tuple(M[i][j] - r1 * one[i][j] for j in range(n)) for i in range(n))
    B = tuple(tuple(M[i][j] - r2 * one[i][j] for j in range(n)) for i in range(n))
    return all(x == 0 for row in _mm(A, B) for x in row)


@dataclass(frozen=True)
class ModuleReport:
    q: int
    a: Fraction
    relations: bool
    tt_trace: Fraction
    tt_det: Fraction
    tt_eigenvalues: tuple[Fraction, Fraction]
    sub_characters: tuple[str, ...]
    factors: tuple[str, ...] = ()

    @property
    def reducible(self) -> bool:
        return bool(self.sub_characters)

    def to_json(self) -> dict:
        return {"q": self.q, "a": str(self.a), "relations": self.relations,
                "TT'_eigenvalues": sorted(str(x) for x in self.tt_eigenvalues),
                "invariant_lines": list(self.sub_characters), "composition_factors": list(self.factors)}


def _eigvecs(M: Mat2, lam: Fraction) -> list[tuple[Fraction, Fraction]]:
    (p, r), (s, t) = M
    p, t = p - lam, t - lam
    if p == r == s == t == 0:
        return [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    if p or r:
        return [(-r, p)]
    return [(t, -s)]


def _apply(M: Mat2, v):
    return tuple(M[i][0] * v[0] + M[i][1] * v[1] for i in range(2))


def module_report(q: int, a: Fraction | int) -> ModuleReport:
    T, Tp = principal_series_module(q, a)
    TT = _mm(T, Tp)
    tr = TT[0][0] + TT[1][1]
    dt = TT[0][0] * TT[1][1] - TT[0][1] * TT[1][0]
    a = Fraction(a)
    eig = (q * q * a, q * q / a)
    subs = []
    for name, (t, tp) in characters(q).items():
        for v in _eigvecs(T, Fraction(t)):
            if _apply(T, v) == tuple(t * x for x in v) and _apply(Tp, v) == tuple(tp * x for x in v):
                subs.append(name)
                break
    factors = []
    if subs:
        chars = characters(q)
        t, tp = chars[subs[0]]
        quotient = (T[0][0] + T[1][1] - t, Tp[0][0] + Tp[1][1] - tp)
        factors = sorted([subs[0]] + [n for n, v in chars.items() if v == quotient])
    return ModuleReport(q, a, _quadratic_zero(T, q ** 3, -1) and _quadratic_zero(Tp, q, -1),
                        tr, dt, eig, tuple(subs), tuple(factors))


# ------------------------------------------------------------------ unipotent relation


@dataclass(frozen=True)
class UnipotentSolution:
    q: int
    status: str
    values: tuple
    families: tuple[str, ...]

    def to_json(self) -> dict:
        return {"q": self.q, "status": self.status, "a": [str(v) for v in self.values], "families": list(self.families)}


def u3_unipotent_relation_solve(q: int) -> UnipotentSolution:
    """Values of a for which s' sigma(u) s'^-1 = u^q has a solution u != 1 over Q.

    u = [x, y, z] is upper unitriangular, sigma(u) = J u^{-T} J^{-1} with J antidiagonal
    (1, -1, 1), s' = diag(a, 1, 1). Even q is reported as unhandled: the closed form of
    u^q halves q(q - 1)xz, which the surrounding argument only justifies for odd q.
    """
    if q % 2 == 0:
        return UnipotentSolution(q, "unhandled: even q", (), ())
    x, y, z, a = sp.symbols("x y z a")
    u = sp.Matrix([[1, x, y], [0, 1, z], [0, 0, 1]])
    J = sp.Matrix([[0, 0, 1], [0, -1, 0], [1, 0, 0]])
    sigma = J * u.inv().T * J.inv()
    s = sp.diag(a, 1, 1)
    eqs = [e for e in (s * sigma * s.inv() - u ** q) if e != 0]
    values = set()
    families = []
    for sol in sp.solve(eqs, [x, y, z, a], dict=True):
        us = u.subs(sol)
        if us == sp.eye(3):
            families.append("u = 1: any a")
            continue
        if a not in sol:
            raise ArithmeticError(f"nontrivial solution with free a: {sol}")
        values.add(sp.Integer(sol[a]))
        families.append(f"a = {sol[a]}: u = [{us[0, 1]}, {us[0, 2]}, {us[1, 2]}]")
    return UnipotentSolution(q, "ok", tuple(int(v) for v in sorted(values)), tuple(sorted(families)))
