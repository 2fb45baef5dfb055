"""GL(3, F_q) and GSp(4, F_q) as matrix groups, parabolic shapes, coset spaces and double cosets.

Shapes are stabilizers of standard partial flags, so G/H is the G-orbit of a flag and
H1\\G/H2 is the set of H1-orbits on that orbit. Subspaces are hashed by their reduced
row echelon form. Matrices act on column vectors and are stored as tuples of rows of
field codes (see ``SmallField``).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .field import SmallField, small_field

Mat = tuple[tuple[int, ...], ...]
Subspace = tuple[tuple[int, ...], ...]
Flag = tuple[Subspace, ...]

MAX_ORDER = 250_000
KINDS = ("GL3", "GSp4")


class GroupTooLarge(ValueError):
    pass


# ------------------------------------------------------------------ linear algebra over SmallField

def mat_mul(F: SmallField, A: Mat, B: Mat) -> Mat:
    add, mul = F.add, F.mul
    n, m = len(A), len(B[0])
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            acc = 0
            for t, a in enumerate(Ai):
                if a:
                    b = B[t][j]
                    if b:
                        acc = add[acc][mul[a][b]]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def transpose(A: Mat) -> Mat:
    return tuple(zip(*A))


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def apply(F: SmallField, g: Mat, v: Sequence[int]) -> tuple[int, ...]:
    add, mul = F.add, F.mul
    out = []
    for row in g:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = add[acc][mul[a][b]]
        out.append(acc)
    return tuple(out)


def rref(F: SmallField, vectors: Iterable[Sequence[int]]) -> Subspace:
    rows = [list(v) for v in vectors]
    if not rows:
        return ()
    n = len(rows[0])
    out: list[list[int]] = []
    col = 0
    r = 0
    while r < len(rows) and col < n:
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv[rows[r][col]]
        rows[r] = [F.mul[inv][x] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [F.sub(x, F.mul[c][y]) for x, y in zip(rows[i], rows[r])]
        r += 1
        col += 1
    out = [tuple(row) for row in rows[:r]]
    return tuple(out)


def det(F: SmallField, A: Mat) -> int:
    M = [list(row) for row in A]
    n = len(M)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg[d]
        d = F.mul[d][M[c][c]]
        inv = F.inv[M[c][c]]
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.mul[M[i][c]][inv]
                M[i] = [F.sub(x, F.mul[f][y]) for x, y in zip(M[i], M[c])]
    return d


# ------------------------------------------------------------------ groups

def symplectic_form(F: SmallField) -> Mat:
    """Skew-diagonal form: <e1, e4> = <e2, e3> = 1."""
    m1 = F.neg[1]
    return ((0, 0, 0, 1), (0, 0, 1, 0), (0, m1, 0, 0), (m1, 0, 0, 0))


def classical_order(kind: str, q: int) -> int:
    if kind == "GL3":
        return q ** 3 * (q - 1) * (q ** 2 - 1) * (q ** 3 - 1)
    if kind == "GSp4":
        return q ** 4 * (q - 1) * (q ** 2 - 1) * (q ** 4 - 1)
    raise ValueError(f"unknown group kind {kind!r}")


@dataclass
class FiniteMatrixGroup:
    kind: str
    q: int
    F: SmallField = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        self.F = small_field(self.q)
        est = classical_order(self.kind, self.q)
        if est > MAX_ORDER:
            raise GroupTooLarge(f"{self.kind}({self.q}) has {est} elements; the limit is {MAX_ORDER}")

    @property
    def n(self) -> int:
        return 3 if self.kind == "GL3" else 4

    @cached_property
    def form(self) -> Mat | None:
        return symplectic_form(self.F) if self.kind == "GSp4" else None

    def similitude(self, g: Mat) -> int | None:
        """nu(g) with g^T J g = nu J, or None when g is not a similitude."""
        J = self.form
        M = mat_mul(self.F, mat_mul(self.F, transpose(g), J), g)
        nu = M[0][3]
        if nu == 0:
            return None
        for i in range(4):
            for j in range(4):
                if M[i][j] != self.F.mul[nu][J[i][j]]:
                    return None
        return nu

    def contains(self, g: Mat) -> bool:
        if det(self.F, g) == 0:
            return False
        return self.kind == "GL3" or self.similitude(g) is not None

    def _triangular(self, lower: bool) -> list[Mat]:
        n = self.n
        slots = [(i, j) for i in range(n) for j in range(n) if (i > j if lower else i < j)]
        out = []
        for vals in product(range(self.q), repeat=len(slots)):
            g = [list(r) for r in identity(n)]
            for (i, j), v in zip(slots, vals):
                g[i][j] = v
            g = tuple(tuple(r) for r in g)
            if self.contains(g):
                out.append(g)
        return out

    @cached_property
    def unipotent(self) -> list[Mat]:
        return self._triangular(lower=False)

    @cached_property
    def lower_unipotent(self) -> list[Mat]:
        return self._triangular(lower=True)

    @cached_property
    def torus(self) -> list[Mat]:
        n = self.n
        out = []
        for d in product(self.F.units, repeat=n):
            g = tuple(tuple(d[i] if i == j else 0 for j in range(n)) for i in range(n))
            if self.contains(g):
                out.append(g)
        return out

    @cached_property
    def generators(self) -> list[Mat]:
        """Torus and both unipotent radicals of the Borel pair; these generate G."""
        return self.torus + self.unipotent + self.lower_unipotent

    @cached_property
    def borel_order(self) -> int:
        return len(self.torus) * len(self.unipotent)

    @cached_property
    def order(self) -> int:
        """|G/B| * |B|, with G/B found as the orbit of the standard full flag."""
        return len(coset_space(self, shape(self.kind, "I"))) * self.borel_order

    def apply_flag(self, g: Mat, flag: Flag) -> Flag:
        F = self.F
        return tuple(rref(F, (apply(F, g, v) for v in sub)) for sub in flag)


# ------------------------------------------------------------------ shapes

def _span(n: int, idx: Iterable[int]) -> Subspace:
    return tuple(tuple(1 if t == i else 0 for t in range(n)) for i in idx)


@dataclass(frozen=True)
class ParahoricShape:
    """Reduction of a parahoric: the stabilizer of a standard partial flag.

    ``flag`` lists spans of initial basis vectors; an empty flag is the whole group.
    K' has no model inside G(F_q) and is handled through Weyl groups instead.
    """

    name: str
    kind: str
    dims: tuple[int, ...]

    def base_flag(self, n: int) -> Flag:
        return tuple(_span(n, range(d)) for d in self.dims)

    def contains(self, G: FiniteMatrixGroup, g: Mat) -> bool:
        if not G.contains(g):
            return False
        base = self.base_flag(G.n)
        return G.apply_flag(g, base) == base

    def generators(self, G: FiniteMatrixGroup) -> list[Mat]:
        """Members of G's generating set lying in the shape; for a standard parabolic these generate it."""
        return [g for g in G.generators if self.contains(G, g)]


_SHAPES = {
    ("GL3", "K"): (),
    ("GL3", "J"): (2,),
    ("GL3", "I"): (1, 2),
    ("GSp4", "K"): (),
    ("GSp4", "J"): (1,),
    ("GSp4", "J'"): (2,),
    ("GSp4", "I"): (1, 2),
}


def shape(kind: str, name: str) -> ParahoricShape:
    try:
        return ParahoricShape(name, kind, _SHAPES[(kind, name)])
    except KeyError:
        raise ValueError(f"no finite model for {name} in {kind}") from None


def shape_names(kind: str) -> list[str]:
    return [name for k, name in _SHAPES if k == kind]


def is_closed(G: FiniteMatrixGroup, H: ParahoricShape, trials: int = 200, seed: int = 0) -> bool:
    """Products and inverses of random members stay in H."""
    rng = random.Random(seed)
    gens = H.generators(G)
    members = list(gens)
    for _ in range(trials):
        a, b = rng.choice(members), rng.choice(members)
        c = mat_mul(G.F, a, b)
        if not H.contains(G, c):
            return False
        members.append(c)
    for g in members[: trials // 4]:
        x, k = g, 1
        while x != identity(G.n):
            x = mat_mul(G.F, x, g)
            k += 1
        inv = identity(G.n)
        for _ in range(k - 1):
            inv = mat_mul(G.F, inv, g)
        if not H.contains(G, inv):
            return False
    return True


# ------------------------------------------------------------------ cosets

def coset_space(G: FiniteMatrixGroup, H: ParahoricShape) -> list[Flag]:
    """G/H as the orbit of H's flag."""
    start = H.base_flag(G.n)
    seen = {start}
    dq = deque([start])
    gens = G.generators
    while dq:
        x = dq.popleft()
        for g in gens:
            y = G.apply_flag(g, x)
            if y not in seen:
                seen.add(y)
                dq.append(y)
    return sorted(seen)


def orbits(G: FiniteMatrixGroup, gens: Sequence[Mat], points: Sequence[Flag]) -> list[list[Flag]]:
    pts = set(points)
    seen: set = set()
    out = []
    for p in points:
        if p in seen:
            continue
        orb = [p]
        seen.add(p)
        dq = deque([p])
        while dq:
            x = dq.popleft()
            for g in gens:
                y = G.apply_flag(g, x)
                if y not in seen:
                    if y not in pts:
                        raise ArithmeticError("generator leaves the coset space")
                    seen.add(y)
                    orb.append(y)
                    dq.append(y)
        out.append(sorted(orb))
    return out


def double_coset_count(G: FiniteMatrixGroup, H1: ParahoricShape, H2: ParahoricShape) -> int:
    """|H1 \\ G / H2|."""
    return len(orbits(G, H1.generators(G), coset_space(G, H2)))


def index(G: FiniteMatrixGroup, big: ParahoricShape, small: ParahoricShape) -> int:
    """[big : small] = |G/small| / |G/big|."""
    a, b = len(coset_space(G, small)), len(coset_space(G, big))
    if a % b:
        raise ArithmeticError("coset counts do not divide")
    return a // b
