"""Maximal orders and integral lattices inside a definite quaternion algebra.

Elements of an order O are written as integer coordinate vectors in a fixed
Z-basis (o_0, ..., o_3). Lattices contained in O are integer row bases in
those coordinates, kept in Hermite normal form.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Sequence

from sympy import sqrt_mod

from ..exact.linalg import det, inverse, vecmat
from ..exact.normal_forms import hnf
from .algebra import QuaternionAlgebra, as_quat

Vec = tuple


class QuaternionOrder:
    """A Z-order given by four rational basis vectors in the 1, i, j, k coordinates."""

    def __init__(self, alg: QuaternionAlgebra, basis: Sequence[Sequence]):
        self.alg = alg
        self.basis = tuple(as_quat(b) for b in basis)
        self._to_coords = inverse([list(b) for b in self.basis])
        n = 4
        table = [[None] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                table[a][b] = self.coords(alg.mul(self.basis[a], self.basis[b]))
        self.table = table
        self.conj_matrix = [self.coords(alg.conj(b)) for b in self.basis]
        self.one = self.coords((1, 0, 0, 0))
        for row in table:
            for v in row:
                if any(Fraction(x).denominator != 1 for x in v):
                    raise ArithmeticError("basis is not closed under multiplication")
        if any(Fraction(x).denominator != 1 for x in self.one):
            raise ArithmeticError("order does not contain 1")
        self.table = [[tuple(int(x) for x in v) for v in row] for row in table]
        self.conj_matrix = [tuple(int(x) for x in v) for v in self.conj_matrix]
        self.one = tuple(int(x) for x in self.one)
        self.trd_basis = tuple(int(alg.trd(b)) for b in self.basis)
        self.gram = [[self.trd(self.mul(ea, self.conj(eb))) for eb in _units(n)] for ea in _units(n)]

    # element arithmetic in order coordinates
    def coords(self, q: Sequence) -> Vec:
        """Order coordinates (Fractions) of an element given in 1, i, j, k."""
        return tuple(vecmat(list(q), self._to_coords))

    def to_quat(self, x: Sequence) -> tuple:
        return tuple(sum(Fraction(c) * b[t] for c, b in zip(x, self.basis)) for t in range(4))

    def mul(self, x: Sequence[int], y: Sequence[int]) -> Vec:
        out = [0, 0, 0, 0]
        T = self.table
        for a in range(4):
            xa = x[a]
            if not xa:
                continue
            row = T[a]
            for b in range(4):
                yb = y[b]
                if not yb:
                    continue
                c = xa * yb
                v = row[b]
                out[0] += c * v[0]
                out[1] += c * v[1]
                out[2] += c * v[2]
                out[3] += c * v[3]
        return tuple(out)

    def conj(self, x: Sequence[int]) -> Vec:
        return tuple(vecmat(list(x), self.conj_matrix))

    def trd(self, x: Sequence[int]) -> int:
        return sum(a * t for a, t in zip(x, self.trd_basis))

    def nrd(self, x: Sequence[int]) -> int:
        G = self.gram
        return sum(x[a] * G[a][b] * x[b] for a in range(4) for b in range(4)) // 2

    def right_mult_matrix(self, y: Sequence[int]) -> list[list[int]]:
        """Rows: coordinates of o_a * y."""
        return [list(self.mul(e, y)) for e in _units(4)]

    def left_mult_matrix(self, y: Sequence[int]) -> list[list[int]]:
        """Rows: coordinates of y * o_a."""
        return [list(self.mul(y, e)) for e in _units(4)]

    # certificates
    @cached_property
    def discriminant_square(self) -> int:
        """det of the Gram matrix of (x, y) -> trd(x * conj(y)); equals p^2 for a maximal order."""
        return int(det(self.gram))

    def is_maximal(self) -> bool:
        return self.discriminant_square == self.alg.p ** 2

    def integrality_ok(self) -> bool:
        return all(isinstance(t, int) for t in self.trd_basis) and all(
            self.nrd(e) * 2 == self.gram[i][i] for i, e in enumerate(_units(4)))


def _units(n: int) -> list[tuple[int, ...]]:
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


def maximal_order(alg: QuaternionAlgebra) -> QuaternionOrder:
    """A maximal order of the algebra returned by build_algebra."""
    a, b, p = alg.a, alg.b, alg.p
    h = Fraction(1, 2)
    q = Fraction(1, 4)
    if p == 2:
        basis = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (h, h, h, h)]
    elif a == -1:
        basis = [(1, 0, 0, 0), (0, 1, 0, 0), (0, h, h, 0), (h, 0, 0, h)]
    elif a == -2:
        basis = [(h, 0, h, h), (0, q, h, q), (0, 0, 1, 0), (0, 0, 0, 1)]
    else:
        r = -a
        c = int(sqrt_mod(-pow(p, -1, r), r))
        basis = [(h, h, 0, 0), (0, 0, h, -h), (0, Fraction(1, r), 0, Fraction(-c, r)), (0, 0, 0, 1)]
    order = QuaternionOrder(alg, basis)
    if not order.is_maximal():
        raise ArithmeticError(f"constructed order has discriminant square {order.discriminant_square}")
    return order


class Lattice:
    """A full-rank sublattice of an order, stored as a Hermite basis in order coordinates."""

    __slots__ = ("order", "basis", "_inv", "_norm", "_gram")

    def __init__(self, order: QuaternionOrder, gens: Sequence[Sequence[int]]):
        self.order = order
        self.basis = tuple(tuple(r) for r in hnf([list(g) for g in gens], 4))
        if len(self.basis) != 4:
            raise ValueError("lattice is not of full rank")
        self._inv = None
        self._norm = None
        self._gram = None

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        return f"Lattice({[list(r) for r in self.basis]})"

    @property
    def index(self) -> int:
        """[O : L]."""
        d = 1
        for i, r in enumerate(self.basis):
            d *= r[i]
        return d

    @property
    def norm(self) -> int:
        """Reduced norm of a left ideal: the square root of its index in O."""
        if self._norm is None:
            idx = self.index
            s = isqrt(idx)
            if s * s != idx:
                raise ArithmeticError("index is not a square")
            self._norm = s
        return self._norm

    def coords(self, x: Sequence[int]) -> list[Fraction]:
        """Coordinates of an order element in this lattice's basis."""
        if self._inv is None:
            self._inv = inverse([list(r) for r in self.basis])
        return vecmat(list(x), self._inv)

    def contains(self, x: Sequence[int]) -> bool:
        return all(c.denominator == 1 for c in self.coords(x))

    def gram(self) -> list[list[int]]:
        """Gram matrix of 2*nrd in this basis."""
        if self._gram is None:
            G = self.order.gram
            B = self.basis
            GB = [[sum(G[a][c] * B[j][c] for c in range(4)) for j in range(4)] for a in range(4)]
            self._gram = [[sum(B[i][a] * GB[a][j] for a in range(4)) for j in range(4)] for i in range(4)]
        return self._gram

    def element(self, c: Sequence[int]) -> tuple[int, ...]:
        B = self.basis
        return tuple(sum(c[i] * B[i][t] for i in range(4)) for t in range(4))

    def conjugate(self) -> Lattice:
        return Lattice(self.order, [self.order.conj(r) for r in self.basis])

    def times(self, other: Lattice) -> Lattice:
        """The product lattice (Z-span of all products x*y)."""
        mul = self.order.mul
        return Lattice(self.order, [mul(x, y) for x in self.basis for y in other.basis])

    def right_times(self, y: Sequence[int]) -> list[tuple[int, ...]]:
        mul = self.order.mul
        return [mul(x, y) for x in self.basis]

    def contains_lattice(self, other: Lattice) -> bool:
        return all(self.contains(x) for x in other.basis)
