"""Left ideal classes of a maximal order, found by exploring prime-norm neighbors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import nextprime

from ..exact.linalg import vecmat
from .enumeration import lll_gram, short_vectors
from .order import Lattice, QuaternionOrder


def splitting_idempotent(order: QuaternionOrder, r: int) -> tuple[int, ...]:
    """An element e of O with e^2 = e mod rO, e not 0 or 1 mod r.

    Any element with trace 1 and norm 0 mod r works (x^2 - trd(x) x + nrd(x) = 0).
    The search runs over coefficient vectors in lexicographic order.
    """
    for c in itertools.product(range(r), repeat=4):
        if order.trd(c) % r == 1 % r and order.nrd(c) % r == 0:
            return c
    raise ArithmeticError(f"O/{r}O has no nontrivial idempotent ({r} ramified?)")


def line_keys(r: int) -> list[tuple[int, int]]:
    """Points of P^1(F_r) as normalized pairs: (1, t) for t in F_r, then (0, 1)."""
    return [(1, t) for t in range(r)] + [(0, 1)]


def normalize_line(u: int, v: int, r: int) -> tuple[int, int]:
    u %= r
    v %= r
    if u:
        return (1, v * pow(u, -1, r) % r)
    if v:
        return (0, 1)
    raise ValueError("zero vector has no line")


@dataclass
class LineSpace:
    """The 2-dimensional space e*(I/rI) whose lines index the index-r^2 sublattices of I."""

    ideal: Lattice
    r: int
    eps_matrix: list[list[int]]  # rows: I-coords of e*b_i mod r
    w: tuple[tuple[int, ...], tuple[int, ...]]  # echelon basis of the image
    pivots: tuple[int, int]

    def vector(self, key: tuple[int, int]) -> list[int]:
        return [(key[0] * a + key[1] * b) % self.r for a, b in zip(*self.w)]

    def key_of(self, vec: Sequence[int]) -> tuple[int, int]:
        """Line containing a nonzero vector of the image (given in I-coordinates mod r)."""
        return normalize_line(vec[self.pivots[0]], vec[self.pivots[1]], self.r)

    def key_of_sublattice(self, S: Lattice) -> tuple[int, int]:
        return self.key_of_generators(S.basis)

    def key_of_generators(self, gens: Sequence[Sequence[int]]) -> tuple[int, int]:
        """Line of the sublattice O*gens + rI, read off from the epsilon-images of the generators."""
        r = self.r
        key = None
        for b in gens:
            c = [int(x) % r for x in self.ideal.coords(b)]
            img = [sum(c[i] * self.eps_matrix[i][t] for i in range(4)) % r for t in range(4)]
            if any(img):
                k = self.key_of(img)
                if key is not None and k != key:
                    raise ArithmeticError("sublattice does not correspond to a single line")
                key = k
        if key is None:
            raise ArithmeticError("sublattice contains no line")
        return key


def line_space(I: Lattice, eps: Sequence[int], r: int) -> LineSpace:
    order = I.order
    E = []
    for b in I.basis:
        c = I.coords(order.mul(eps, b))
        E.append([int(x) % r for x in c])
    rows = _rref_mod([list(row) for row in E], r)
    if len(rows) != 2:
        raise ArithmeticError("idempotent image is not 2-dimensional")
    piv = tuple(next(t for t in range(4) if row[t]) for row in rows)
    return LineSpace(I, r, E, (tuple(rows[0]), tuple(rows[1])), piv)


def _rref_mod(A: list[list[int]], r: int) -> list[list[int]]:
    rows = []
    A = [row[:] for row in A]
    ncols = len(A[0])
    rk = 0
    for c in range(ncols):
        p = next((i for i in range(rk, len(A)) if A[i][c] % r), None)
        if p is None:
            continue
        A[rk], A[p] = A[p], A[rk]
        inv = pow(A[rk][c], -1, r)
        A[rk] = [x * inv % r for x in A[rk]]
        for i in range(len(A)):
            if i != rk and A[i][c] % r:
                f = A[i][c]
                A[i] = [(x - f * y) % r for x, y in zip(A[i], A[rk])]
        rk += 1
    rows = [row for row in A[:rk]]
    return rows


def sublattice_of_line(ls: LineSpace, key: tuple[int, int]) -> Lattice:
    """O*w + rI for the line spanned by w."""
    I = ls.ideal
    order = I.order
    w = I.element(ls.vector(key))
    gens = [order.mul(e, w) for e in _units()] + [tuple(ls.r * x for x in b) for b in I.basis]
    M = Lattice(order, gens)
    if M.index != I.index * ls.r ** 2:
        raise ArithmeticError("line sublattice has the wrong index")
    return M


def _units():
    return [tuple(int(i == j) for j in range(4)) for i in range(4)]


def find_isomorphism(M: Lattice, J: Lattice) -> tuple[int, ...] | None:
    """An element y of conj(J)*M with nrd(y) = nrd(J) nrd(M), or None.

    Such y exists iff M = J*x with x = y / nrd(J).
    """
    P = J.conjugate().times(M)
    target = 2 * J.norm * M.norm
    U, G = lll_gram(P.gram())
    for c, _ in short_vectors(G, target, stop_at=target):
        coeffs = vecmat(list(c), U)
        return P.element(coeffs)
    return None


def count_norm_vectors(P: Lattice, values: int) -> dict[int, int]:
    """Number of vectors of each value of 2*nrd up to the bound ``values``."""
    U, G = lll_gram(P.gram())
    counts: dict[int, int] = {}
    for _, val in short_vectors(G, values):
        counts[val] = counts.get(val, 0) + 1
    return counts


def unit_elements(I: Lattice) -> list[tuple[int, ...]]:
    """Elements y of conj(I)*I with nrd(y) = nrd(I)^2; y / nrd(I) are the units of the right order."""
    P = I.conjugate().times(I)
    target = 2 * I.norm ** 2
    U, G = lll_gram(P.gram())
    out = []
    for c, _ in short_vectors(G, target, stop_at=target):
        out.append(P.element(vecmat(list(c), U)))
    return sorted(out)


@dataclass
class NeighborRecord:
    """An index-r^2 sublattice M of I_i, M = I_j * (y / nrd(I_j))."""

    key: tuple[int, int]
    lattice: Lattice
    target: int
    y: tuple[int, ...]


@dataclass
class IdealClassSet:
    """Representatives of the left ideal classes, with the unit-group orders of their right orders."""

    order: QuaternionOrder
    reps: list[Lattice]
    weights: list[int]
    neighbor_prime: int
    _eps: dict[int, tuple[int, ...]] = field(default_factory=dict, repr=False)
    _neighbors: dict[int, list[list[NeighborRecord]]] = field(default_factory=dict, repr=False)
    _line_spaces: dict[int, list[LineSpace]] = field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return self.order.alg.p

    @property
    def h(self) -> int:
        return len(self.reps)

    def mass(self) -> Fraction:
        return sum((Fraction(1, w) for w in self.weights), Fraction(0))

    def idempotent(self, r: int) -> tuple[int, ...]:
        if r not in self._eps:
            self._eps[r] = splitting_idempotent(self.order, r)
        return self._eps[r]

    def line_spaces(self, r: int) -> list[LineSpace]:
        if r not in self._line_spaces:
            eps = self.idempotent(r)
            self._line_spaces[r] = [line_space(I, eps, r) for I in self.reps]
        return self._line_spaces[r]

    def identify(self, M: Lattice) -> tuple[int, tuple[int, ...]]:
        for j, J in enumerate(self.reps):
            y = find_isomorphism(M, J)
            if y is not None:
                return j, y
        raise ArithmeticError("sublattice is not isomorphic to any representative")

    def neighbors(self, r: int) -> list[list[NeighborRecord]]:
        """For each class i, the r+1 index-r^2 sublattices of I_i with their classes."""
        if r == self.p:
            raise ValueError("no neighbors at the ramified prime")
        if r not in self._neighbors:
            table = []
            for ls in self.line_spaces(r):
                recs = []
                for key in line_keys(r):
                    M = sublattice_of_line(ls, key)
                    j, y = self.identify(M)
                    recs.append(NeighborRecord(key, M, j, y))
                table.append(recs)
            self._neighbors[r] = table
        return self._neighbors[r]

    def right_unit_action(self, i: int, y: Sequence[int]) -> list[list[int]]:
        """Matrix (rows = I_i-coords of b * y / N_i) of right multiplication by a unit."""
        I = self.reps[i]
        N = I.norm
        out = []
        for b in I.basis:
            prod = self.order.mul(b, y)
            c = I.coords(prod)
            row = [x / N for x in c]
            if any(x.denominator != 1 for x in row):
                raise ArithmeticError("element does not act on the ideal")
            out.append([int(x) for x in row])
        return out


def least_split_prime(p: int) -> int:
    return 3 if p == 2 else 2


def ideal_classes(order: QuaternionOrder) -> IdealClassSet:
    """Breadth-first search over neighbors at the least prime other than p."""
    p = order.alg.p
    q = least_split_prime(p)
    eps = splitting_idempotent(order, q)
    start = Lattice(order, _units())
    reps = [start]
    queue = [start]
    while queue:
        I = queue.pop(0)
        ls = line_space(I, eps, q)
        for key in line_keys(q):
            M = sublattice_of_line(ls, key)
            if all(find_isomorphism(M, J) is None for J in reps):
                reps.append(M)
                queue.append(M)
    weights = [len(unit_elements(I)) for I in reps]
    keys = []
    for idx, (I, w) in enumerate(zip(reps, weights)):
        P = I.conjugate().times(I)
        N2 = I.norm ** 2
        counts = count_norm_vectors(P, 2 * 6 * N2)
        theta = tuple(counts.get(2 * n * N2, 0) for n in range(1, 7))
        keys.append((w, theta, idx))
    perm = sorted(range(len(reps)), key=lambda t: keys[t])
    cs = IdealClassSet(order, [reps[t] for t in perm], [weights[t] for t in perm], q)
    cs._eps[q] = eps
    return cs


def next_prime_not(p: int, start: int) -> int:
    r = nextprime(start - 1)
    return nextprime(r) if r == p else r
