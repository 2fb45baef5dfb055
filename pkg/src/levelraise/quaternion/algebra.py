"""Definite quaternion algebras over Q ramified at one finite prime."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import isprime, legendre_symbol, primefactors

Quat = tuple  # (x0, x1, x2, x3) in the basis 1, i, j, k


def hilbert_symbol(a: int, b: int, v: int | None) -> int:
    """(a, b)_v for nonzero integers; v = None is the real place."""
    if v is None:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split(a, v)
    beta, w = _split(b, v)
    if v != 2:
        sign = (-1) ** (alpha * beta * ((v - 1) // 2))
        s = sign
        if beta % 2:
            s *= legendre_symbol(u % v, v)
        if alpha % 2:
            s *= legendre_symbol(w % v, v)
        return s

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
    return -1 if e % 2 else 1


def _split(a: int, v: int) -> tuple[int, int]:
    k = 0
    while a % v == 0:
        a //= v
        k += 1
    return k, a


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The algebra (a, b | Q) with i^2 = a, j^2 = b, k = ij = -ji."""

    a: int
    b: int
    p: int

    def mul(self, x: Sequence, y: Sequence) -> Quat:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    @staticmethod
    def conj(x: Sequence) -> Quat:
        return (x[0], -x[1], -x[2], -x[3])

    def nrd(self, x: Sequence):
        return x[0] * x[0] - self.a * x[1] * x[1] - self.b * x[2] * x[2] + self.a * self.b * x[3] * x[3]

    @staticmethod
    def trd(x: Sequence):
        return 2 * x[0]

    def ramified_primes(self) -> list[int]:
        """Finite primes where the Hilbert symbol is -1 (only 2 and divisors of ab can occur)."""
        cands = sorted(set([2] + primefactors(abs(self.a * self.b))))
        return [v for v in cands if hilbert_symbol(self.a, self.b, v) == -1]

    def is_definite(self) -> bool:
        return hilbert_symbol(self.a, self.b, None) == -1


def build_algebra(p: int) -> QuaternionAlgebra:
    """The definite quaternion algebra over Q ramified exactly at p and infinity."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        a, b = -1, -1
    elif p % 4 == 3:
        a, b = -1, -p
    elif p % 8 == 5:
        a, b = -2, -p
    else:
        r = 3
        while not (isprime(r) and r % 4 == 3 and legendre_symbol(r, p) == -1):
            r += 4
        a, b = -r, -p
    alg = QuaternionAlgebra(a, b, p)
    if not alg.is_definite() or alg.ramified_primes() != [p]:
        raise ArithmeticError(f"({a}, {b}) is not ramified exactly at {{{p}, oo}}")
    return alg


def as_quat(x: Sequence) -> Quat:
    return tuple(Fraction(c) for c in x)
