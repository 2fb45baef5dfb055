"""A level-raising instance (p, q): function spaces at levels K, K' and J, and everything built on them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Sequence

from sympy import isprime, legendre_symbol, primerange

from ..congruence import (
    CongruenceReport,
    DegeneracySetup,
    HeckeFamily,
    PairedLattice,
    adjoint_map,
    congruence_module,
    valuation_bound,
    old_new_split,
    restrict,
)
from ..exact.finite_field import GF
from ..exact.linalg import nullspace, rank, solve, transpose
from ..exact.matrix import IntMatrix, RatMatrix
from ..exact.normal_forms import saturate, smith_normal_form
from ..exact.polynomials import char_poly, factor_rational, poly_at_matrix
from ..exact.valuation import INF, valuation
from ..quaternion.algebra import build_algebra
from ..quaternion.brandt import brandt_matrices
from ..quaternion.ideals import IdealClassSet, ideal_classes
from ..quaternion.order import maximal_order
from .eigen import EigenSystem, joint_eigensystems, joint_kernel, verify_eigenvector
from .structure import DoubleCosetSpace, build_level_structure


class HypothesisViolation(ValueError):
    """A hypothesis of the level-raising theorem fails for the requested input."""


_CLASS_CACHE: dict[int, IdealClassSet] = {}


def classes_for(p: int) -> IdealClassSet:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p not in _CLASS_CACHE:
        _CLASS_CACHE[p] = ideal_classes(maximal_order(build_algebra(p)))
    return _CLASS_CACHE[p]


def _diag(ws: Sequence[int]) -> RatMatrix:
    n = len(ws)
    return RatMatrix.from_rows([[Fraction(int(i == j), ws[i]) for j in range(n)] for i in range(n)])


def _block_diag(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n, m = a.nrows, b.nrows
    rows = [list(r) + [0] * m for r in a.rows] + [[0] * n + list(r) for r in b.rows]
    return IntMatrix(rows)


# ------------------------------------------------------------------ old forms at level K

@dataclass
class OldForm:
    """A Galois orbit of Hecke eigenforms at level K, with the restricted Hecke matrices."""

    index: int
    poly: tuple[int, ...]
    basis: list[list[int]]
    ops: dict[int, IntMatrix]
    eisenstein: bool
    vector: list[int] | None = None
    eigenvalues: dict[int, int] | None = None

    @property
    def degree(self) -> int:
        return len(self.basis)

    @property
    def rational(self) -> bool:
        return self.degree == 1

    def reductions(self, ell: int) -> list[EigenSystem]:
        return [es for es, _ in joint_eigensystems(self.ops, ell)]

    def to_json(self) -> dict:
        out = {"index": self.index, "degree": self.degree, "poly": list(self.poly), "eisenstein": self.eisenstein}
        if self.eigenvalues is not None:
            out["eigenvalues"] = {str(r): v for r, v in self.eigenvalues.items()}
        return out


def decompose_level_K(B: dict[int, IntMatrix], labels: Sequence[int]) -> list[OldForm]:
    """Split Q^h into Hecke-irreducible pieces via a generic combination with squarefree char poly."""
    h = B[labels[0]].nrows
    for t in range(1, 40):
        T = IntMatrix.zeros(h, h)
        for i, r in enumerate(labels[:6]):
            T = T + B[r].scale(t ** i)
        facs = factor_rational(char_poly(T))
        if all(e == 1 for _, e in facs):
            break
    else:
        raise ArithmeticError("no generic Hecke operator with squarefree characteristic polynomial")
    forms = []
    ones = [1] * h
    for g, _ in facs:
        G = poly_at_matrix(g, T)
        sub = saturate(nullspace(G, h), h)
        ops = {r: IntMatrix(restrict(B[r], sub)) for r in labels}
        eis = rank(sub + [ones]) == len(sub)
        forms.append(OldForm(0, tuple(g), sub, ops, eis))
    forms.sort(key=lambda f: (not f.eisenstein, f.degree, f.poly))
    for idx, f in enumerate(forms):
        f.index = idx
        if f.rational:
            v = f.basis[0]
            f.vector = list(v)
            f.eigenvalues = {r: f.ops[r][0, 0] for r in labels}
    return forms


# ------------------------------------------------------------------ the instance

@dataclass
class LevelRaisingInstance:
    p: int
    q: int
    rbound: int = 50
    classes: IdealClassSet = field(init=False)
    X: DoubleCosetSpace = field(init=False)
    B: dict[int, IntMatrix] = field(init=False)

    def __post_init__(self):
        if not isprime(self.q):
            raise ValueError(f"{self.q} is not prime")
        if self.q == self.p:
            raise HypothesisViolation("q must differ from p")
        self.classes = classes_for(self.p)
        self.B = brandt_matrices(self.classes, max(self.rbound, self.q))
        self.X = build_level_structure(self.classes, self.q)

    # labels
    @property
    def labels_K(self) -> list[int]:
        return [r for r in primerange(2, self.rbound + 1) if r != self.p]

    @property
    def labels_J(self) -> list[int]:
        return [r for r in primerange(2, self.rbound + 1) if r not in (self.p, self.q)]

    @property
    def h(self) -> int:
        return self.classes.h

    @property
    def k(self) -> int:
        return self.X.index_K

    @property
    def kp(self) -> int:
        return self.X.index_Kp

    @property
    def relative_index(self) -> int:
        return self.X.relative_index

    # projection and averaging matrices
    @cached_property
    def P(self) -> IntMatrix:
        return IntMatrix([[int(e.base == i) for i in range(self.h)] for e in self.X.edges])

    @cached_property
    def Pp(self) -> IntMatrix:
        return IntMatrix([[int(e.target == i) for i in range(self.h)] for e in self.X.edges])

    def _avg(self, which: str) -> RatMatrix:
        W = self.classes.weights
        idx = self.k if which == "K" else self.kp
        rows = [[Fraction(0)] * self.X.size for _ in range(self.h)]
        for e in self.X.edges:
            x = e.base if which == "K" else e.target
            rows[x][e.index] = Fraction(W[x], e.stabilizer * idx)
        return RatMatrix.from_rows(rows)

    @cached_property
    def avg_K(self) -> RatMatrix:
        """Functions on X_J -> X_K: weighted average over pi-fibers."""
        return self._avg("K")

    @cached_property
    def avg_Kp(self) -> RatMatrix:
        return self._avg("Kp")

    @cached_property
    def e_K(self) -> RatMatrix:
        m = self.P @ self.avg_K
        if m @ m != m:
            raise ArithmeticError("e_K is not idempotent")
        return m

    @cached_property
    def e_Kp(self) -> RatMatrix:
        m = self.Pp @ self.avg_Kp
        if m @ m != m:
            raise ArithmeticError("e_K' is not idempotent")
        return m

    @cached_property
    def e_KKp(self) -> RatMatrix:
        """[K:J][K':J]_K (e_K e_K' e_K) as an operator on functions on X_K."""
        m = self.avg_K @ self.e_Kp @ self.P
        return m.scale(self.k * self.relative_index)

    # the degeneracy setup
    @cached_property
    def delta(self) -> RatMatrix:
        rows = [list(a) + list(b) for a, b in zip(self.P.rows, self.Pp.rows)]
        return RatMatrix(IntMatrix(rows))

    @cached_property
    def setup(self) -> DegeneracySetup:
        W = self.classes.weights
        U = PairedLattice(_diag(list(W) + list(W)))
        V = PairedLattice(_diag(self.X.weights_J))
        HU = HeckeFamily({r: _block_diag(self.B[r], self.B[r]) for r in self.labels_J})
        HV = HeckeFamily({r: self.X.hecke(r) for r in self.labels_J})
        return DegeneracySetup(U, HU, V, HV, self.delta)

    def adjoint_blocks(self) -> RatMatrix:
        """[[k I, k avg_K P'], [k' avg_K' P, k' I]]."""
        h = self.h
        tr = (self.avg_K @ self.Pp).scale(self.k).entries()
        bl = (self.avg_Kp @ self.P).scale(self.kp).entries()
        rows = []
        for i in range(h):
            rows.append([Fraction(self.k * (i == j)) for j in range(h)] + tr[i])
        for i in range(h):
            rows.append(bl[i] + [Fraction(self.kp * (i == j)) for j in range(h)])
        return RatMatrix.from_rows(rows)

    def block_identity_holds(self) -> bool:
        return adjoint_map(self.setup) @ self.delta == self.adjoint_blocks()

    # kernel of delta and the Ihara decomposition
    def kernel_dimension(self) -> tuple[int, int]:
        """(dim ker delta by rank, number of connected components of the edge graph)."""
        return 2 * self.h - rank(self.delta.entries()), len(self.X.components())

    def ihara_decompose(self, g: Sequence[int]) -> tuple[list[int], list[int], list[int]]:
        """Integral (f, f') with f(pi e) + f'(pi' e) = g(e), plus the radius of each edge.

        On each connected component f is normalized to vanish at the base of its least edge;
        values then propagate along edges in breadth-first order, so each is an integer
        difference of integers.
        """
        g = [Fraction(x) for x in g]
        if any(x.denominator != 1 for x in g):
            raise ValueError("g must be integral")
        sol = solve(self.delta.entries(), g)
        if sol is None:
            raise ValueError("g is not in the image of delta")
        h = self.h
        f = list(sol[:h])
        fp = list(sol[h:])
        radius = [-1] * self.X.size
        edges = self.X.edges
        for comp in self.X.components():
            rep = edges[comp[0]]
            c = f[rep.base]
            touched_K = {e.base for e in (edges[x] for x in comp)}
            touched_Kp = {e.target for e in (edges[x] for x in comp)}
            for i in touched_K:
                f[i] -= c
            for j in touched_Kp:
                fp[j] += c
            # breadth-first radius from the representative edge
            radius[comp[0]] = 0
            seen_K, seen_Kp = {rep.base}, set()
            dq = deque([comp[0]])
            while dq:
                x = dq.popleft()
                e = edges[x]
                seen_Kp.add(e.target)
                for y in comp:
                    if radius[y] < 0 and (edges[y].base in seen_K or edges[y].target in seen_Kp):
                        radius[y] = radius[x] + 1
                        seen_K.add(edges[y].base)
                        dq.append(y)
        if any(x.denominator != 1 for x in f + fp):
            raise ArithmeticError("Ihara decomposition produced a non-integral preimage")
        f = [int(x) for x in f]
        fp = [int(x) for x in fp]
        check = [f[e.base] + fp[e.target] for e in edges]
        if check != [int(x) for x in g]:
            raise ArithmeticError("Ihara decomposition does not reproduce g")
        return f, fp, radius

    # old and new forms
    @cached_property
    def old_forms(self) -> list[OldForm]:
        return decompose_level_K(self.B, self.labels_K)

    @cached_property
    def new_lattice(self) -> list[list[int]]:
        return old_new_split(self.setup)[3]

    @cached_property
    def new_ops(self) -> dict[int, IntMatrix]:
        basis = self.new_lattice
        return {r: IntMatrix(restrict(self.X.hecke(r), basis)) if basis else IntMatrix([])
                for r in self.labels_J}

    def new_eigensystems(self, ell: int) -> list[tuple[EigenSystem, int]]:
        if not self.new_lattice:
            return []
        return joint_eigensystems(self.new_ops, ell, self.labels_J)


# ------------------------------------------------------------------ tests on a single form

def m_valuation(inst: LevelRaisingInstance, form: OldForm, system: EigenSystem) -> int | float | None:
    """v_lambda of m = eta_f(e_{K,K'}) - [K:J][K':J]_K at the prime lambda cut out by ``system``.

    Exact for rational forms. Otherwise an ell-adic idempotent for ``system`` is lifted inside the
    Hecke algebra of the orbit and v_lambda is read from a determinant on its image; None when that
    determinant is not a multiple of the residue degree (the local Hecke ring is not a DVR).
    """
    ell = system.ell
    E = _restrict_rat(inst.e_KKp, form.basis)
    M = [[E[i][j] - (inst.k * inst.relative_index if i == j else 0) for j in range(form.degree)]
         for i in range(form.degree)]
    if form.rational:
        return valuation(M[0][0], ell)
    den = 1
    for row in M:
        for x in row:
            den = lcm(den, x.denominator)
    Mint = [[int(x * den) for x in row] for row in M]
    prec = 40
    mod = ell ** prec
    e = _local_idempotent(form, system, prec)
    d = form.degree
    A = _mm_int(Mint, e, mod)
    one_minus = [[((i == j) - e[i][j]) % mod for j in range(d)] for i in range(d)]
    T = [[(A[i][j] + one_minus[i][j]) % mod for j in range(d)] for i in range(d)]
    D = smith_normal_form(T).factors
    vdet = 0
    for x in D:
        v = valuation(x % mod, ell) if x % mod else prec
        vdet += min(v, prec)
    if len(D) < d:
        return INF
    if vdet >= prec:
        return INF
    rk = _rank_mod(e, ell)
    num = vdet - rk * valuation(den, ell)
    if num % system.k:
        return None
    return num // system.k


def _restrict_rat(m: RatMatrix, basis: list[list[int]]) -> list[list[Fraction]]:
    A = m.entries()
    Bt = transpose(basis)
    cols = []
    for b in basis:
        img = [sum(A[i][t] * b[t] for t in range(len(b))) for i in range(len(A))]
        cols.append(solve(Bt, img))
    return transpose(cols)


def _mm_int(A, B, mod):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(m)) % mod for j in range(p)] for i in range(n)]


def _rank_mod(A, ell):
    from ..exact.finite_field import rank_ff
    F = GF(ell)
    return rank_ff([[F(x) for x in row] for row in A], F)


def _local_idempotent(form: OldForm, system: EigenSystem, prec: int) -> list[list[int]]:
    """An integer matrix, idempotent mod ell^prec, projecting onto the generalized eigenspace of ``system``.

    For each label r the primary factor g_r of the char poly mod ell (the minimal polynomial of
    system[r]) gives a polynomial u_r(A_r) that is idempotent mod ell; the product over labels is
    sharpened by e <- 3e^2 - 2e^3.
    """
    ell = system.ell
    d = form.degree
    mod = ell ** prec
    e = [[int(i == j) for j in range(d)] for i in range(d)]
    for r in system.labels:
        A = form.ops[r]
        u = _primary_projector(A, system[r], ell)
        e = _mm_int(e, u, ell)
    for _ in range(prec.bit_length() + 2):
        e2 = _mm_int(e, e, mod)
        e3 = _mm_int(e2, e, mod)
        e = [[(3 * e2[i][j] - 2 * e3[i][j]) % mod for j in range(d)] for i in range(d)]
    return e


def _primary_projector(A: IntMatrix, beta, ell: int) -> list[list[int]]:
    """Integer matrix reducing mod ell to the projector onto the primary part of A for the
    minimal polynomial of beta over F_ell."""
    from sympy import ZZ
    from sympy.polys.galoistools import gf_div, gf_gcdex, gf_from_int_poly, gf_mul, gf_rem, gf_pow

    from ..exact.polynomials import factor_mod
    cp = char_poly(A)
    facs = factor_mod(cp, ell)
    F = beta.field
    target = None
    for g, mult in facs:
        val = F.zero
        for c in g:
            val = val * beta + c
        if val.is_zero():
            target = (g, mult)
            break
    if target is None:
        raise ArithmeticError("eigenvalue is not a root of the characteristic polynomial")
    g, mult = target
    cpm = gf_from_int_poly(cp, ell)
    gm = gf_pow(g, mult, ell, ZZ)
    rest, rem = gf_div(cpm, gm, ell, ZZ)
    if rem:
        raise ArithmeticError("primary factor does not divide")
    # s*gm + t*rest = 1; projector onto ker gm(A) is t*rest(A)
    s, t, h = gf_gcdex(gm, rest, ell, ZZ)
    if h != [1]:
        raise ArithmeticError("primary factors are not coprime")
    poly = gf_mul(t, rest, ell, ZZ)
    poly = gf_rem(poly, cpm, ell, ZZ)
    return poly_at_matrix([int(c) for c in poly], A, ell)


def classical_test(system: EigenSystem, q: int) -> bool:
    """a_q^2 = (1+q)^2 in the residue field."""
    a = system[q]
    return a * a == (1 + q) ** 2


def star_criterion(inst: LevelRaisingInstance, form: OldForm, system: EigenSystem) -> dict:
    """Star criterion for the reduction ``system`` of ``form``: v_lambda(m) >= 1."""
    ell = system.ell
    _check_ell(inst, ell)
    vm = m_valuation(inst, form, system)
    out = {"vm": vm}
    if form.rational:
        a = form.eigenvalues[inst.q]
        m = Fraction(a * a, inst.q + 1) - inst.k * inst.relative_index
        out["m"] = m
    holds = None if vm is None else vm >= 1
    out["holds"] = holds
    vrel = valuation(inst.relative_index, ell)
    out["n0_star"] = None if vm is None else (vm - vrel if vm != INF else INF)
    return out


def _check_ell(inst: LevelRaisingInstance, ell: int) -> None:
    if not isprime(ell):
        raise ValueError(f"{ell} is not prime")
    if (inst.q * inst.relative_index) % ell == 0:
        raise HypothesisViolation(f"ell = {ell} divides q [K':J]_K = {inst.q * inst.relative_index}")


def abelian_test(system: EigenSystem, p: int, bound: int = 50) -> tuple[bool, str | None]:
    """Is the system congruent to r -> chi(r)(1 + r) for chi trivial or the Legendre symbol mod p?"""
    labels = [r for r in system.labels if isinstance(r, int) and r <= bound and r != p]
    chars = {"trivial": lambda r: 1}
    if p > 2:
        chars["legendre"] = lambda r: legendre_symbol(r % p, p)
    for name, chi in chars.items():
        if all(system[r] == chi(r) * (1 + r) for r in labels):
            return True, name
    return False, None


def two_places(p: int, ell: int, count: int = 2, search: int = 200) -> list[int]:
    """Places v with ell not dividing |K_v bar|: v(v^2-1) for v != p, p(p^2-1) at p (the same formula)."""
    out = []
    for v in primerange(2, search):
        if (v * (v * v - 1)) % ell:
            out.append(v)
            if len(out) == count:
                break
    return out


@dataclass
class RaiseResult:
    system: EigenSystem
    congruent: list[tuple[EigenSystem, int]]
    kernel_dim: int
    verified: bool
    verified_mod_power: int | None = None


def raise_level(inst: LevelRaisingInstance, form: OldForm, system: EigenSystem, n0: int | None = None,
                check_hypotheses: bool = True) -> RaiseResult:
    """New eigensystems at level J congruent to ``system`` at every label r <= rbound, r prime to pq."""
    ell = system.ell
    _check_ell(inst, ell)
    if check_hypotheses:
        ab, name = abelian_test(system, inst.p, inst.rbound)
        if ab:
            raise HypothesisViolation(f"abelian mod {ell}: Eisenstein congruence detected")
        crit = star_criterion(inst, form, system)
        if not crit["holds"]:
            raise HypothesisViolation("star criterion does not hold")
        if len(two_places(inst.p, ell)) < 2:
            raise HypothesisViolation(f"fewer than two places v with {ell} prime to |K_v|")
    labels = inst.labels_J
    target = system.restrict(labels)
    news = inst.new_eigensystems(ell)
    congruent = [(es, dim) for es, dim in news if es.congruent(target, labels)]
    kernel = joint_kernel(inst.new_ops, target, labels) if inst.new_lattice else []
    verified = bool(kernel) and all(verify_eigenvector(inst.new_ops, target, v, labels) for v in kernel)
    if bool(kernel) != bool(congruent):
        raise ArithmeticError("joint kernel and eigensystem enumeration disagree")
    res = RaiseResult(target, congruent, len(kernel), verified)
    if form.rational and n0 is not None and n0 != INF and n0 >= 1 and inst.new_lattice:
        res.verified_mod_power = _lift_power(inst, form, ell, int(n0))
    return res


def _lift_power(inst: LevelRaisingInstance, form: OldForm, ell: int, n: int) -> int:
    """Largest t <= n such that a new vector nonzero mod ell is a joint eigenvector mod ell^t."""
    rows = []
    d = len(inst.new_lattice)
    for r in inst.labels_J:
        a = form.eigenvalues[r]
        for i, row in enumerate(inst.new_ops[r].rows):
            rows.append([x - (a if i == j else 0) for j, x in enumerate(row)])
    D = list(smith_normal_form(rows).factors) + [0] * d
    best = 0
    for x in D[:d]:
        v = n if x == 0 else min(valuation(x, ell), n)
        best = max(best, v)
    return best


def valuation_bound_for_form(inst: LevelRaisingInstance, form: OldForm, ell: int) -> CongruenceReport:
    """The valuation bound on u = ((q+1) f, -a_q f), which delta-dual-delta maps to ((q+1)^2 - a_q^2)(f, 0)."""
    if not form.rational:
        raise ValueError("the valuation bound needs an integral eigenvector")
    f = form.vector
    a = form.eigenvalues[inst.q]
    u = [(inst.q + 1) * x for x in f] + [-a * x for x in f]
    return valuation_bound(inst.setup, u, ell)


def instance_congruence_module(inst: LevelRaisingInstance):
    return congruence_module(inst.setup)
