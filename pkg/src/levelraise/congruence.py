"""Paired lattices with Hecke actions, old/new splittings and congruence modules.

Operators act on column vectors. A lattice is always Z^n inside Q^n; the
pairing is <x, y> = x^T G y for a rational symmetric Gram matrix G.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .exact.linalg import (
    common_denominator,
    content,
    inverse,
    matmul,
    matvec,
    nullspace,
    rank,
    solve,
    transpose,
)
from .exact.matrix import IntMatrix, RatMatrix, as_rat
from .exact.normal_forms import (
    hnf,
    integer_kernel,
    lattice_intersection,
    rational_lattice_basis,
    saturate,
    smith_normal_form,
)
from .exact.valuation import INF, valuation


class InvariantError(ArithmeticError):
    """An internal consistency check failed."""


class DegenerateEigenvector(ValueError):
    """delta-dual-delta kills the vector, so no bound can be extracted."""


@dataclass(frozen=True)
class PairedLattice:
    """Z^n with a nondegenerate symmetric rational pairing."""

    gram: RatMatrix

    def __post_init__(self):
        g = self.gram
        if g.nrows != g.ncols or g.transpose() != g:
            raise ValueError("Gram matrix must be square and symmetric")
        if g.nrows and rank(g.entries()) < g.nrows:
            raise ValueError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return self.gram.nrows

    def pair(self, x: Sequence, y: Sequence) -> Fraction:
        G = self.gram.entries()
        return sum((Fraction(x[i]) * G[i][j] * y[j] for i in range(self.rank) for j in range(self.rank)), Fraction(0))


@dataclass(frozen=True)
class HeckeFamily:
    """Labelled commuting integer operators, with phi -> phi-dual given by ``dual`` (default: identity)."""

    ops: Mapping[Hashable, IntMatrix]
    dual: Mapping[Hashable, Hashable] = field(default_factory=dict)

    @property
    def labels(self) -> list:
        return list(self.ops)

    def dual_of(self, label):
        return self.dual.get(label, label)

    def check(self, lattice: PairedLattice) -> None:
        labels = self.labels
        for a, b in itertools.combinations(labels, 2):
            if self.ops[a] @ self.ops[b] != self.ops[b] @ self.ops[a]:
                raise InvariantError(f"operators {a} and {b} do not commute")
        G = lattice.gram
        Ginv = RatMatrix.from_rows(inverse(G.entries())) if lattice.rank else G
        for a in labels:
            adj = Ginv @ self.ops[a].transpose() @ G
            if adj != as_rat(self.ops[self.dual_of(a)]):
                raise InvariantError(f"operator {a} is not adjoint to {self.dual_of(a)}")


def dual_annihilators(L: PairedLattice) -> tuple[int, int]:
    """Minimal A with A Z^n in the dual lattice and minimal B with B (dual lattice) in Z^n.

    The dual lattice is G^{-1} Z^n, so A is the denominator of G and B that of G^{-1};
    both are read off the Smith form of the integer numerator of G.
    """
    G = L.gram
    if L.rank == 0:
        return 1, 1
    snf = smith_normal_form(G.num)
    if snf.rank < L.rank:
        raise ValueError("degenerate Gram matrix")
    A = G.den
    # G^{-1} = den * V D^{-1} U, whose denominator divides the largest invariant factor
    Ginv = RatMatrix.from_rows(inverse(G.entries()))
    B = Ginv.den
    if snf.factors[-1] % B:
        raise InvariantError("dual annihilator inconsistent with Smith form")
    return A, B


@dataclass
class DegeneracySetup:
    """delta : U -> V between paired lattices, intertwining two Hecke families."""

    U: PairedLattice
    hecke_U: HeckeFamily
    V: PairedLattice
    hecke_V: HeckeFamily
    delta: RatMatrix
    A_U: int = 0
    B_V: int = 0
    C: int = 0

    def __post_init__(self):
        if self.A_U == 0:
            self.A_U = dual_annihilators(self.U)[0]
        if self.B_V == 0:
            self.B_V = dual_annihilators(self.V)[1]
        if self.C == 0:
            self.C = ihara_constant(self.delta)

    @property
    def E(self) -> int:
        return self.A_U * self.B_V * self.C ** 2

    def check(self) -> None:
        d = self.delta
        for lab in self.hecke_U.labels:
            if d @ self.hecke_U.ops[lab] != self.hecke_V.ops[lab] @ d:
                raise InvariantError(f"delta does not intertwine label {lab}")
        self.hecke_U.check(self.U)
        self.hecke_V.check(self.V)
        A, _ = dual_annihilators(self.U)
        if self.A_U % A:
            raise InvariantError("A_U does not annihilate Z^n modulo the dual lattice")
        _, B = dual_annihilators(self.V)
        if self.B_V % B:
            raise InvariantError("B_V does not annihilate the dual lattice modulo Z^n")
        if not d.is_integral():
            raise InvariantError("delta does not map U_Z into V_Z")
        if self.C % ihara_constant(d):
            raise InvariantError("C does not kill (V_Z cap im delta) / delta(U_Z)")
        # orthogonal decompositions
        K = kernel_basis(self)
        Kp = orthogonal_complement(self.U, K)
        if len(K) + len(Kp) != self.U.rank or rank(K + Kp) != self.U.rank:
            raise InvariantError("U is not ker delta + its orthogonal complement")
        old, new = old_new_split(self)[:2]
        if rank(old + new) != self.V.rank:
            raise InvariantError("V is not im delta + its orthogonal complement")


def columns(m: RatMatrix) -> list[list[Fraction]]:
    return transpose(m.entries())


def ihara_constant(delta: RatMatrix) -> int:
    """Exponent of (V_Z cap im delta) / delta(U_Z)."""
    cols = [c for c in columns(delta) if any(c)]
    if not cols:
        return 1
    sat = saturate(cols)
    img, d = rational_lattice_basis(cols)
    if d != 1:
        raise InvariantError("delta is not integral")
    coords = []
    for v in img:
        c = solve(transpose(sat), v)
        coords.append([int(x) for x in c])
    snf = smith_normal_form(coords)
    return snf.factors[-1] if snf.factors else 1


def kernel_basis(setup: DegeneracySetup) -> list[list[Fraction]]:
    return nullspace(setup.delta.entries(), setup.U.rank)


def orthogonal_complement(L: PairedLattice, vecs: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {x : <v, x> = 0 for all v in vecs}."""
    if not vecs:
        return [[Fraction(int(i == j)) for j in range(L.rank)] for i in range(L.rank)]
    G = L.gram.entries()
    rows = [matvec(transpose(G), list(v)) for v in vecs]  # v^T G as a row
    return nullspace(rows, L.rank)


def adjoint_map(setup: DegeneracySetup) -> RatMatrix:
    """delta-dual = G_U^{-1} delta^T G_V."""
    GU_inv = RatMatrix.from_rows(inverse(setup.U.gram.entries()))
    return GU_inv @ setup.delta.transpose() @ setup.V.gram


def old_new_split(setup: DegeneracySetup):
    """(old basis, new basis, saturated old lattice, saturated new lattice) inside V."""
    old = [c for c in columns(setup.delta)]
    old_basis = _independent(old)
    new_basis = orthogonal_complement(setup.V, old_basis)
    return old_basis, new_basis, saturate(old_basis) if old_basis else [], saturate(new_basis) if new_basis else []


def _independent(vecs):
    from .exact.linalg import rref
    if not vecs:
        return []
    R, _ = rref(vecs)
    return R


def restrict(op: IntMatrix, basis: Sequence[Sequence[int]]) -> list[list[int]]:
    """Matrix R of an operator on a stable lattice: op b_i = sum_j R[j][i] b_j (column convention)."""
    B = [list(b) for b in basis]
    Bt = transpose(B)
    cols = []
    for b in B:
        img = op @ b
        c = solve(Bt, img)
        if c is None or any(Fraction(x).denominator != 1 for x in c):
            raise InvariantError("lattice is not stable under the operator")
        cols.append([int(x) for x in c])
    return transpose(cols)


@dataclass(frozen=True)
class CongruenceModule:
    invariant_factors: tuple[int, ...]
    u_prime: tuple[tuple[int, ...], ...]
    sub: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        o = 1
        for f in self.invariant_factors:
            o *= f
        return o


def congruence_module(setup: DegeneracySetup) -> CongruenceModule:
    """Invariant factors (>1) of U'/(U' cap E^{-1} delta-dual delta(U_Z)), U' = Z^n cap (ker delta)^perp."""
    n = setup.U.rank
    K = kernel_basis(setup)
    perp = orthogonal_complement(setup.U, K)
    Up = saturate(perp) if perp else []
    if not Up:
        return CongruenceModule((), (), ())
    dd = adjoint_map(setup) @ setup.delta
    X = [[x / setup.E for x in col] for col in columns(dd)]
    X = [c for c in X if any(c)]
    Xint, D = rational_lattice_basis(X)
    scaled_Up = [[D * a for a in row] for row in Up]
    inter = lattice_intersection(scaled_Up, Xint)
    inter = [[Fraction(a, D) for a in row] for row in inter]
    if len(inter) != len(Up):
        raise InvariantError("E^{-1} delta-dual delta(U) does not span (ker delta)^perp")
    coords = []
    Upt = transpose(Up)
    for v in inter:
        c = solve(Upt, v)
        coords.append([int(x) for x in c])
    snf = smith_normal_form(coords)
    inter_int = tuple(tuple(int(x) for x in v) for v in inter)
    return CongruenceModule(tuple(f for f in snf.factors if f != 1), tuple(tuple(r) for r in Up), inter_int)


def _monomials(labels: Sequence, degree: int) -> list[tuple]:
    out = [()]
    for d in range(1, degree + 1):
        out.extend(itertools.combinations_with_replacement(labels, d))
    return out


def _eval_monomial(ops: Mapping, mono: tuple, n: int) -> IntMatrix:
    m = IntMatrix.identity(n)
    for lab in mono:
        m = m @ ops[lab]
    return m


def hecke_factorization_check(setup: DegeneracySetup, module: CongruenceModule, labels: Sequence | None = None,
                              degree: int = 2) -> dict:
    """Verify that Hecke polynomials vanishing on V_new (or on V_old) kill the congruence module.

    Relations are the integer kernel of the map from monomials (degree <= ``degree``)
    to endomorphisms of the saturated new (old) lattice.
    """
    if labels is None:
        labels = setup.hecke_V.labels[:4]
    monos = _monomials(labels, degree)
    _, _, old_sat, new_sat = old_new_split(setup)
    nU = setup.U.rank
    nV = setup.V.rank
    report = {"monomials": len(monos), "relations": {}, "ok": True}
    sub_t = transpose([list(r) for r in module.sub]) if module.sub else None
    for name, basis in (("new", new_sat), ("old", old_sat)):
        if not basis:
            report["relations"][name] = 0
            continue
        flat_cols = []
        for mono in monos:
            R = restrict(_eval_monomial(setup.hecke_V.ops, mono, nV), basis)
            flat_cols.append([x for row in R for x in row])
        rel = integer_kernel(transpose(flat_cols))
        report["relations"][name] = len(rel)
        for c in rel:
            phi = IntMatrix.zeros(nU, nU)
            for coef, mono in zip(c, monos):
                if coef:
                    phi = phi + _eval_monomial(setup.hecke_U.ops, mono, nU).scale(coef)
            for u in module.u_prime:
                img = phi @ list(u)
                if sub_t is None:
                    ok = not any(img)
                else:
                    sol = solve(sub_t, img)
                    ok = sol is not None and all(Fraction(x).denominator == 1 for x in sol)
                if not ok:
                    report["ok"] = False
    return report


@dataclass(frozen=True)
class CongruenceReport:
    ell: int
    m: Fraction
    vm: int | float
    vE: int
    vCurlyE: int
    n0: int | float
    character: tuple[tuple[str, int], ...]
    modulus: int

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "m_num": self.m.numerator,
            "m_den": self.m.denominator,
            "vE": self.vE,
            "vCurlyE": self.vCurlyE,
            "n0": None if self.n0 == INF else int(self.n0),
            "character": [{"label": lab, "value_mod": val} for lab, val in self.character],
        }


def eigenvalues_of(hecke: HeckeFamily, u: Sequence[int]) -> dict:
    """Integer eigenvalues of u for every label; raises if u is not a common eigenvector."""
    out = {}
    idx = next(i for i, x in enumerate(u) if x)
    for lab in hecke.labels:
        img = hecke.ops[lab] @ list(u)
        lam = Fraction(img[idx], u[idx])
        if any(Fraction(a) != lam * b for a, b in zip(img, u)) or lam.denominator != 1:
            raise ValueError(f"u is not an integral eigenvector of {lab}")
        out[lab] = int(lam)
    return out


def valuation_bound(setup: DegeneracySetup, u: Sequence[int], ell: int, eta: Mapping | None = None,
                m: Fraction | None = None) -> CongruenceReport:
    """n0 = v(m) - v(E) - v(curly E) for an integral Hecke eigenvector u of U."""
    if not any(u):
        raise ValueError("u must be nonzero")
    if any(Fraction(x).denominator != 1 for x in u):
        raise ValueError("u must be integral")
    u = [int(x) for x in u]
    vals = eigenvalues_of(setup.hecke_U, u)
    if eta is not None:
        for lab, v in eta.items():
            if lab in vals and vals[lab] != v:
                raise ValueError(f"eigenvalue mismatch at {lab}")
    w = adjoint_map(setup) @ setup.delta @ u
    if not any(w):
        raise DegenerateEigenvector("delta-dual delta kills u: no bound")
    m_true = content(w)
    if m is None:
        m = m_true
    else:
        m = Fraction(m)
        if any(Fraction(x / m).denominator != 1 for x in w):
            raise ValueError("delta-dual delta(u) is not in m U_Z")
    # fractional ideal {s : s u in Z^n + ker delta} = {s : s delta(u) in delta(Z^n)}
    cols = [c for c in columns(setup.delta) if any(c)]
    basis, d = rational_lattice_basis(cols)
    du = setup.delta @ u
    coords = solve(transpose(basis), [x * d for x in du])
    den = common_denominator(coords)
    g = content([x * den for x in coords])
    gen = Fraction(den) / g  # F_u = gen * Z
    v_curly = -valuation(gen, ell)
    vm = valuation(m, ell)
    vE = valuation(setup.E, ell)
    n0 = vm - vE - v_curly
    character = ()
    modulus = 1
    if n0 != INF and n0 > 0:
        modulus = ell ** int(n0)
        character = tuple((str(lab), vals[lab] % modulus) for lab in setup.hecke_U.labels)
    return CongruenceReport(ell, m, vm, int(vE), int(v_curly), n0, character, modulus)
