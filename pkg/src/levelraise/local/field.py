"""Small finite fields F_q with elements encoded as integers 0..q-1 and table arithmetic."""

from __future__ import annotations

from functools import lru_cache

from sympy import factorint

from ..exact.finite_field import GF


class SmallField:
    """F_q for a prime power q; 0 and 1 encode zero and one, integers < p encode the prime field."""

    def __init__(self, q: int):
        fac = factorint(q)
        if len(fac) != 1:
            raise ValueError(f"{q} is not a prime power")
        (p, k), = fac.items()
        self.q, self.p, self.k = q, p, k
        F = GF(p, k)
        elems = sorted(F.elements(), key=lambda e: e.c[::-1])
        # order: integers first (c = (a, 0, ..)), so that the code of a prime-field element is a itself
        elems.sort(key=lambda e: (any(e.c[1:]), e.c[::-1]))
        self.elements = elems
        index = {e.c: i for i, e in enumerate(elems)}
        self.add = [[index[(a + b).c] for b in elems] for a in elems]
        self.mul = [[index[(a * b).c] for b in elems] for a in elems]
        self.neg = [index[(-a).c] for a in elems]
        self.inv = [None] + [index[a.inverse().c] for a in elems[1:]]
        self.units = list(range(1, q))
        gen = next(g for g in self.units if self._order(g) == q - 1)
        self.primitive = gen

    def _order(self, g: int) -> int:
        x, n = g, 1
        while x != 1:
            x = self.mul[x][g]
            n += 1
        return n

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    def of_int(self, n: int) -> int:
        return n % self.p


@lru_cache(maxsize=None)
def small_field(q: int) -> SmallField:
    return SmallField(q)
