"""Immutable exact matrix carriers over the integers and the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class IntMatrix:
    """An integer matrix with arbitrary-precision entries.

    Rows are stored as tuples, so instances are hashable and safe to share.
    """

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Sequence[int]], ncols: int | None = None):
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, r: int, c: int) -> IntMatrix:
        return cls([[0] * c for _ in range(r)], c)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def transpose(self) -> IntMatrix:
        if not self.rows:
            return IntMatrix([[] for _ in range(self.ncols)], 0)
        return IntMatrix(zip(*self.rows), self.nrows)

    T = property(transpose)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatMatrix):
            return other.den == 1 and other.num == self
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.rows, self.ncols))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})"

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix([[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            return RatMatrix(self @ other.num, other.den)
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
            return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows], other.ncols)
        # vector
        return [sum(a * b for a, b in zip(r, other)) for r in self.rows]

    def mod(self, ell: int) -> list[list[int]]:
        return [[a % ell for a in r] for r in self.rows]

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)


class RatMatrix:
    """A rational matrix kept as an integer numerator over a positive common denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: IntMatrix, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = den
        for r in num.rows:
            for a in r:
                g = gcd(g, a)
                if g == 1:
                    break
        if g > 1:
            num = IntMatrix([[a // g for a in r] for r in num.rows], num.ncols)
            den //= g
        self.num = num
        self.den = den

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ncols: int | None = None) -> RatMatrix:
        rows = [[Fraction(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        d = 1
        for r in rows:
            for x in r:
                d = _lcm(d, x.denominator)
        return cls(IntMatrix([[int(x * d) for x in r] for r in rows], ncols), d)

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls(IntMatrix.identity(n))

    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape

    @property
    def nrows(self) -> int:
        return self.num.nrows

    @property
    def ncols(self) -> int:
        return self.num.ncols

    def entries(self) -> list[list[Fraction]]:
        return [[Fraction(a, self.den) for a in r] for r in self.num.rows]

    def __getitem__(self, idx) -> Fraction:
        return Fraction(self.num[idx], self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def to_int(self) -> IntMatrix:
        if self.den != 1:
            raise ValueError("matrix is not integral")
        return self.num

    def transpose(self) -> RatMatrix:
        return RatMatrix(self.num.transpose(), self.den)

    T = property(transpose)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntMatrix):
            return self.den == 1 and self.num == other
        return isinstance(other, RatMatrix) and self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatMatrix({self.num.tolist()!r}, den={self.den})"

    def _coerce(self, other) -> RatMatrix:
        return RatMatrix(other) if isinstance(other, IntMatrix) else other

    def __add__(self, other) -> RatMatrix:
        other = self._coerce(other)
        d = _lcm(self.den, other.den)
        return RatMatrix(self.num.scale(d // self.den) + other.num.scale(d // other.den), d)

    def __sub__(self, other) -> RatMatrix:
        return self + (-self._coerce(other))

    def __neg__(self) -> RatMatrix:
        return RatMatrix(-self.num, self.den)

    def scale(self, c) -> RatMatrix:
        c = Fraction(c)
        return RatMatrix(self.num.scale(c.numerator), self.den * c.denominator)

    def __matmul__(self, other):
        if isinstance(other, (IntMatrix, RatMatrix)):
            other = self._coerce(other)
            return RatMatrix(self.num @ other.num, self.den * other.den)
        return [Fraction(x, self.den) for x in self.num @ [Fraction(v) for v in other]]

    def is_zero(self) -> bool:
        return self.num.is_zero()


def as_rat(m) -> RatMatrix:
    """Coerce an IntMatrix, RatMatrix or nested sequence into a RatMatrix."""
    if isinstance(m, RatMatrix):
        return m
    if isinstance(m, IntMatrix):
        return RatMatrix(m)
    return RatMatrix.from_rows(m)


def as_int(m) -> IntMatrix:
    if isinstance(m, IntMatrix):
        return m
    if isinstance(m, RatMatrix):
        return m.to_int()
    return IntMatrix(m)
