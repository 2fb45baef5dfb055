"""ell-adic valuations on the rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

INF = math.inf


def valuation(x, ell: int) -> int | float:
    """v_ell(x) for a rational x; +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    n, d = x.numerator, x.denominator
    while n % ell == 0:
        n //= ell
        v += 1
    while d % ell == 0:
        d //= ell
        v -= 1
    return v


@dataclass(frozen=True)
class Valuation:
    """A value of v_ell, kept together with its prime."""

    ell: int
    value: int | float

    @classmethod
    def of(cls, x, ell: int) -> Valuation:
        return cls(ell, valuation(x, ell))

    @property
    def infinite(self) -> bool:
        return self.value == INF

    def to_json(self):
        return None if self.infinite else int(self.value)
