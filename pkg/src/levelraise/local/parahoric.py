"""Parahoric indices and Iwahori double cosets from the affine Weyl group, with finite-group cross-checks.

A parahoric is named by a set S of affine simple reflections. Its finite Weyl group
W_S embeds in the finite Weyl group through linear parts, so W_S can be enumerated
as a group of small integer matrices. [P_S : I] is the Poincare sum over W_S with
parameter q_s per generator, and dim Ind(chi)^{P_S} = |W| / |W_S| for an unramified
principal series.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .field import small_field
from .groups import FiniteMatrixGroup, GroupTooLarge, coset_space, shape

Lin = tuple[tuple[int, ...], ...]


def _perm(n: int, i: int, j: int) -> Lin:
    rows = [[1 if c == r else 0 for c in range(n)] for r in range(n)]
    rows[i], rows[j] = rows[j], rows[i]
    return tuple(map(tuple, rows))


def _neg(n: int, i: int) -> Lin:
    return tuple(tuple((-1 if r == i else 1) if c == r else 0 for c in range(n)) for r in range(n))


@dataclass(frozen=True)
class AffineWeylData:
    kind: str
    reflections: dict
    # exponent e with q_s = q**e
    exponents: dict
    shapes: dict
    finite: tuple


WEYL = {
    "GL3": AffineWeylData(
        "GL3",
        {"s0": _perm(3, 0, 2), "s1": _perm(3, 0, 1), "s2": _perm(3, 1, 2)},
        {"s0": 1, "s1": 1, "s2": 1},
        {"K": ("s1", "s2"), "K'": ("s0", "s1"), "J": ("s1",), "I": ()},
        ("s1", "s2"),
    ),
    "GSp4": AffineWeylData(
        "GSp4",
        {"s0": _neg(2, 0), "s1": _perm(2, 0, 1), "s2": _neg(2, 1)},
        {"s0": 1, "s1": 1, "s2": 1},
        {"K": ("s1", "s2"), "K'": ("s0", "s2"), "J": ("s2",), "J'": ("s1",), "I": ()},
        ("s1", "s2"),
    ),
    "U3": AffineWeylData(
        "U3",
        {"s0": ((-1,),), "s1": ((-1,),)},
        {"s0": 1, "s1": 3},
        {"K": ("s1",), "K'": ("s0",), "I": ()},
        ("s1",),
    ),
}


def _mul(A: Lin, B: Lin) -> Lin:
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in zip(*B)) for row in A)


@lru_cache(maxsize=None)
def weyl_subgroup(kind: str, gens: tuple[str, ...]) -> tuple[tuple[Lin, tuple[str, ...]], ...]:
    """Elements of W_S, each with a reduced word found by breadth-first search."""
    data = WEYL[kind]
    n = len(next(iter(data.reflections.values())))
    one = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    words = {one: ()}
    dq = deque([one])
    while dq:
        x = dq.popleft()
        for s in gens:
            y = _mul(x, data.reflections[s])
            if y not in words:
                words[y] = words[x] + (s,)
                dq.append(y)
    return tuple(sorted(words.items()))


def poincare(kind: str, name: str, q: int) -> int:
    data = WEYL[kind]
    total = 0
    for _, word in weyl_subgroup(kind, data.shapes[name]):
        total += q ** sum(data.exponents[s] for s in word)
    return total


def weyl_index(kind: str, big: str, small: str, q: int) -> int:
    a, b = poincare(kind, big, q), poincare(kind, small, q)
    if a % b:
        raise ArithmeticError(f"{small} is not inside {big}")
    return a // b


def weyl_fixed_dim(kind: str, name: str) -> int:
    """dim of the fixed space of an unramified principal series: |W| / |W_S| = |I \\ G / P_S|."""
    data = WEYL[kind]
    return len(weyl_subgroup(kind, data.finite)) // len(weyl_subgroup(kind, data.shapes[name]))


def hermitian_isotropic_lines(n: int, q: int) -> int:
    """Isotropic lines in F_{q^2}^n for h(x, y) = sum x_i conj(y_{n-1-i})."""
    F = small_field(q * q)

    def conj(x: int) -> int:
        y = 1
        for _ in range(q):
            y = F.mul[y][x]
        return y if x else 0

    count = 0
    for lead in range(n):
        # vectors whose first nonzero coordinate is 1 at position ``lead``
        tails = [()]
        for _ in range(n - lead - 1):
            tails = [t + (c,) for t in tails for c in range(F.q)]
        for t in tails:
            v = (0,) * lead + (1,) + t
            acc = 0
            for i in range(n):
                acc = F.add[acc][F.mul[v[i]][conj(v[n - 1 - i])]]
            count += acc == 0
    return count


def closed_form_indices(kind: str, q: int) -> dict[str, int]:
    if kind == "U3":
        big, kp = q ** 3 + 1, q + 1
        return {"K:I": big, "K':I": kp, "K':I relative": kp // gcd(kp, big)}
    if kind == "GL3":
        k = 1 + q + q * q
        return {"K:J": k, "K':J": k, "K':J relative": 1}
    if kind == "GSp4":
        k = (q ** 4 - 1) // (q - 1)
        return {"K:J": k, "K':J": q, "K':J relative": q // gcd(q, k)}
    raise ValueError(f"unknown kind {kind!r}")


@dataclass
class IndexReport:
    kind: str
    q: int
    closed: dict[str, int]
    models: dict[str, dict[str, int]] = field(default_factory=dict)

    def agreement(self) -> dict[str, bool]:
        out = {}
        for src, vals in self.models.items():
            for key, v in vals.items():
                out[f"{key} [{src}]"] = self.closed.get(key) == v
        return out

    def conflicts(self) -> dict[str, tuple[int, int]]:
        return {f"{key} [{src}]": (self.closed[key], v)
                for src, vals in self.models.items() for key, v in vals.items() if self.closed.get(key) != v}

    def to_json(self) -> dict:
        return {"kind": self.kind, "q": self.q, "closed_form": self.closed, "models": self.models,
                "agreement": self.agreement()}


def parahoric_indices(kind: str, q: int) -> IndexReport:
    """Closed forms plus every available model: affine Weyl Poincare sums, and
    coset counts in G(F_q) or Hermitian isotropic line counts where those exist."""
    rep = IndexReport(kind, q, closed_form_indices(kind, q))
    if kind == "U3":
        kb, kpb = weyl_index(kind, "K", "I", q), weyl_index(kind, "K'", "I", q)
        rep.models["weyl"] = {"K:I": kb, "K':I": kpb, "K':I relative": kpb // gcd(kpb, kb)}
        hb, hpb = hermitian_isotropic_lines(3, q), hermitian_isotropic_lines(2, q)
        rep.models["hermitian"] = {"K:I": hb, "K':I": hpb, "K':I relative": hpb // gcd(hpb, hb)}
        return rep
    kj, kpj = weyl_index(kind, "K", "J", q), weyl_index(kind, "K'", "J", q)
    rep.models["weyl"] = {"K:J": kj, "K':J": kpj, "K':J relative": kpj // gcd(kpj, kj)}
    try:
        G = FiniteMatrixGroup(kind, q)
    except GroupTooLarge:
        return rep
    # |G / J| over |G / K| = 1
    rep.models["finite"] = {"K:J": len(coset_space(G, shape(kind, "J")))}
    return rep
