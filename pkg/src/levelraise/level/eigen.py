"""Hecke eigensystems: exact integer ones, and joint eigensystems of integer matrices mod ell."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Hashable, Iterable, Mapping, Sequence

from ..exact.finite_field import GF, FFElement, kernel_mod_ell, matvec_ff, poly_roots, rank_ff, solve_in_span
from ..exact.matrix import IntMatrix
from ..exact.polynomials import char_poly, factor_mod

Value = "int | FFElement"


@dataclass(frozen=True)
class EigenSystem:
    """Labelled eigenvalues; exact integers (``ell`` None) or elements of GF(ell, k)."""

    values: tuple[tuple[Hashable, object], ...]
    ell: int | None = None
    k: int = 1
    abelian_mod_ell: bool | None = None

    @classmethod
    def exact(cls, values: Mapping) -> EigenSystem:
        return cls(tuple((lab, int(v)) for lab, v in values.items()))

    @property
    def labels(self) -> list:
        return [lab for lab, _ in self.values]

    def as_dict(self) -> dict:
        return dict(self.values)

    def __getitem__(self, label):
        for lab, v in self.values:
            if lab == label:
                return v
        raise KeyError(label)

    @property
    def field(self) -> GF | None:
        return None if self.ell is None else GF(self.ell, self.k)

    def reduce(self, ell: int, k: int = 1) -> EigenSystem:
        if self.ell is not None:
            if self.ell != ell:
                raise ValueError("cannot change the characteristic")
            return self.embed(k)
        F = GF(ell, k)
        return EigenSystem(tuple((lab, F(v)) for lab, v in self.values), ell, k)

    def embed(self, k: int) -> EigenSystem:
        if k % self.k:
            raise ValueError("target degree must be a multiple of k")
        F = GF(self.ell, k)
        return EigenSystem(tuple((lab, F(v)) for lab, v in self.values), self.ell, k, self.abelian_mod_ell)

    def restrict(self, labels: Iterable) -> EigenSystem:
        labels = set(labels)
        return EigenSystem(tuple((lab, v) for lab, v in self.values if lab in labels), self.ell, self.k,
                           self.abelian_mod_ell)

    def frobenius(self, times: int = 1) -> EigenSystem:
        return EigenSystem(tuple((lab, v.frobenius(times)) for lab, v in self.values), self.ell, self.k,
                           self.abelian_mod_ell)

    def conjugates(self) -> list[EigenSystem]:
        return [self.frobenius(t) for t in range(self.k)]

    def sort_key(self) -> tuple:
        if self.ell is None:
            return (0, tuple(v for _, v in self.values))
        return (self.k, tuple(v.sort_key() for _, v in self.values))

    def congruent(self, other: EigenSystem, labels: Iterable | None = None) -> bool:
        """Equal mod ell at every common label, up to Frobenius conjugation."""
        ell = self.ell or other.ell
        if ell is None:
            raise ValueError("at least one system must be reduced")
        a = self if self.ell else self.reduce(ell)
        b = other if other.ell else other.reduce(ell)
        k = lcm(a.k, b.k)
        a, b = a.embed(k), b.embed(k)
        common = set(a.labels) & set(b.labels)
        if labels is not None:
            common &= set(labels)
        da = a.as_dict()
        for c in b.conjugates():
            dc = c.as_dict()
            if all(da[lab] == dc[lab] for lab in common):
                return True
        return False

    def to_json(self) -> dict:
        out = {
            "field": None if self.ell is None else {"ell": self.ell, "k": self.k,
                                                    "modulus": list(GF(self.ell, self.k).modulus)},
            "values": [{"label": str(lab), "value": v if self.ell is None else v.to_json()} for lab, v in self.values],
        }
        if self.abelian_mod_ell is not None:
            out["abelian_mod_ell"] = self.abelian_mod_ell
        return out


# ------------------------------------------------------------------ linear algebra over GF

def _restrict(A: Sequence[Sequence[FFElement]], W: Sequence[Sequence[FFElement]], F: GF) -> list[list[FFElement]]:
    """Matrix of A on the span of W (stable): A w_i = sum_j M[j][i] w_j."""
    cols = []
    for w in W:
        c = solve_in_span(W, matvec_ff(A, w), F)
        if c is None:
            raise ArithmeticError("subspace is not stable")
        cols.append(c)
    d = len(W)
    return [[cols[i][j] for i in range(d)] for j in range(d)]


def _poly_at(coeffs_high: Sequence[FFElement], M: Sequence[Sequence[FFElement]], F: GF):
    n = len(M)
    acc = [[F.zero] * n for _ in range(n)]
    for c in coeffs_high:
        acc = [[sum((acc[i][t] * M[t][j] for t in range(n)), F.zero) for j in range(n)] for i in range(n)]
        for i in range(n):
            acc[i][i] = acc[i][i] + c
    return acc


def _mat_pow(M, e: int, F: GF):
    n = len(M)
    result = [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]
    base = M
    while e:
        if e & 1:
            result = _mm(result, base, F)
        base = _mm(base, base, F)
        e >>= 1
    return result


def _mm(A, B, F):
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(p):
            acc = F.zero
            for t in range(m):
                a = Ai[t]
                if a:
                    b = B[t][j]
                    if b:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def _lift_kernel(K_local, W, F):
    """Ambient vectors for kernel vectors written in W-coordinates."""
    n = len(W[0])
    out = []
    for c in K_local:
        v = [F.zero] * n
        for ci, w in zip(c, W):
            if ci:
                v = [a + ci * b for a, b in zip(v, w)]
        out.append(v)
    return out


def _gen_kernel(M, shift: FFElement, F: GF):
    """Kernel of (M - shift)^dim, in local coordinates."""
    d = len(M)
    N = [[M[i][j] - (shift if i == j else F.zero) for j in range(d)] for i in range(d)]
    return kernel_mod_ell(_mat_pow(N, d, F), F)


def _primary_split(mats: Mapping, labels: list, ell: int) -> list[tuple[list[list[FFElement]], int]]:
    """Joint primary components over F_ell, each with its residue degree."""
    F = GF(ell)
    n = next(iter(mats.values())).nrows
    comps = [([[F.one if i == j else F.zero for j in range(n)] for i in range(n)], 1)]
    for lab in labels:
        A = [[F(x) for x in row] for row in mats[lab].rows]
        new = []
        for W, deg in comps:
            M = _restrict(A, W, F)
            cp = [c.c[0] for c in char_poly(M, F.zero, F.one)]
            for g, mult in factor_mod(cp, ell):
                G = _poly_at([F(c) for c in g], M, F)
                Gm = _mat_pow(G, mult, F)
                K = kernel_mod_ell(Gm, F)
                new.append((_lift_kernel(K, W, F), lcm(deg, len(g) - 1)))
        comps = new
    return comps


def joint_eigensystems(mats: Mapping[Hashable, IntMatrix], ell: int, labels: Sequence | None = None
                       ) -> list[tuple[EigenSystem, int]]:
    """All joint eigensystems mod ell of commuting integer matrices, one per Frobenius orbit.

    Each comes with the dimension of its joint generalized eigenspace over its own field.
    The orbit representative is the conjugate with the least sort key; results are
    sorted by (degree, eigenvalue list).
    """
    labels = list(mats) if labels is None else list(labels)
    if not labels or next(iter(mats.values())).nrows == 0:
        return []
    out = []
    for W0, k in _primary_split(mats, labels, ell):
        if not W0:
            continue
        F = GF(ell, k)
        W0 = [[F(x) for x in v] for v in W0]
        leaves = []
        _split_joint(mats, labels, 0, W0, F, {}, leaves)
        seen = set()
        for vals, dim in leaves:
            es = EigenSystem(tuple((lab, vals[lab]) for lab in labels), ell, k)
            rep = min(es.conjugates(), key=EigenSystem.sort_key)
            key = rep.sort_key()
            if key in seen:
                continue
            seen.add(key)
            out.append((rep, dim))
    out.sort(key=lambda t: t[0].sort_key())
    return out


def _split_joint(mats, labels, idx, W, F, assigned, leaves):
    if idx == len(labels):
        leaves.append((dict(assigned), len(W)))
        return
    lab = labels[idx]
    A = [[F(x) for x in row] for row in mats[lab].rows]
    M = _restrict(A, W, F)
    cp = char_poly(M, F.zero, F.one)
    for beta in poly_roots(list(reversed(cp)), F):
        K = _gen_kernel(M, beta, F)
        if not K:
            continue
        assigned[lab] = beta
        _split_joint(mats, labels, idx + 1, _lift_kernel(K, W, F), F, assigned, leaves)
        del assigned[lab]


def joint_kernel(mats: Mapping[Hashable, IntMatrix], system: EigenSystem, labels: Sequence | None = None
                 ) -> list[list[FFElement]]:
    """Common kernel over the system's field of (A_r - chi(r)) for the given labels."""
    F = system.field
    labels = list(labels) if labels is not None else [lab for lab in system.labels if lab in mats]
    if not labels:
        raise ValueError("no labels to compare")
    n = mats[labels[0]].nrows
    rows = []
    for lab in labels:
        chi = system[lab]
        for i, row in enumerate(mats[lab].rows):
            rows.append([F(x) - (chi if i == j else F.zero) for j, x in enumerate(row)])
    return kernel_mod_ell(rows, F) if n else []


def verify_eigenvector(mats: Mapping, system: EigenSystem, v: Sequence[FFElement], labels: Iterable) -> bool:
    F = system.field
    if not any(v):
        return False
    for lab in labels:
        A = [[F(x) for x in row] for row in mats[lab].rows]
        Av = matvec_ff(A, v)
        if any(a != system[lab] * b for a, b in zip(Av, v)):
            return False
    return True


def semisimple_mod_ell(mats: Iterable[IntMatrix], ell: int) -> tuple[bool, int, int]:
    """(semisimple?, nilradical dimension, algebra dimension) for the F_ell-algebra the matrices generate.

    The nilradical of a commutative algebra over F_ell is the kernel of a -> a^(ell^s)
    once ell^s >= its dimension; that map is F_ell-linear.
    """
    F = GF(ell)
    gens = [[[F(x) for x in row] for row in m.rows] for m in mats]
    if not gens:
        return True, 0, 0
    n = len(gens[0])
    one = [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]
    basis = [one]
    flat = [_flat(one)]
    frontier = [one]
    while frontier:
        nxt = []
        for b in frontier:
            for g in gens:
                c = _mm(g, b, F)
                fc = _flat(c)
                if rank_ff(flat + [fc], F) > len(flat):
                    basis.append(c)
                    flat.append(fc)
                    nxt.append(c)
        frontier = nxt
    d = len(basis)
    e = ell
    while e < d:
        e *= ell
    images = []
    for b in basis:
        img = _mat_pow(b, e, F)
        coords = solve_in_span(flat, _flat(img), F)
        if coords is None:
            raise ArithmeticError("algebra is not closed")
        images.append(coords)
    # matrix of the Frobenius power in the basis: column t = coords of basis[t]^e
    phi = [[images[t][s] for t in range(d)] for s in range(d)]
    nil = len(kernel_mod_ell(phi, F))
    return nil == 0, nil, d


def _flat(m):
    return [x for row in m for x in row]
