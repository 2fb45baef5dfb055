"""Edges of the q-neighbor graph modulo units: the finite set X_J and its two projections.

An element of X_J is an orbit of the finite group Gamma_i = O_R(I_i)^x acting on
the q + 1 lines at class i (equivalently on the index-q^2 sublattices S of I_i).
pi sends the orbit to i and pi' to the class of S.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from ..exact.matrix import IntMatrix
from ..quaternion.ideals import IdealClassSet, line_keys, unit_elements


@dataclass(frozen=True)
class Edge:
    index: int
    base: int
    key: tuple[int, int]
    orbit: tuple[tuple[int, int], ...]
    stabilizer: int
    target: int


@dataclass
class DoubleCosetSpace:
    classes: IdealClassSet
    q: int
    edges: list[Edge]
    lookup: dict[tuple[int, tuple[int, int]], int]
    units: list[list[tuple[int, ...]]]
    _hecke: dict[int, IntMatrix] = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def weights_K(self) -> list[int]:
        return list(self.classes.weights)

    @property
    def weights_Kp(self) -> list[int]:
        return list(self.classes.weights)

    @property
    def weights_J(self) -> list[int]:
        return [e.stabilizer for e in self.edges]

    @property
    def pi(self) -> list[int]:
        return [e.base for e in self.edges]

    @property
    def pi_prime(self) -> list[int]:
        return [e.target for e in self.edges]

    def fiber_index(self, which: str) -> int:
        """Weighted fiber size sum_{e -> x} W_x / W_e, asserted constant in x."""
        proj = self.pi if which == "K" else self.pi_prime
        W = self.classes.weights
        sums = [Fraction(0)] * self.classes.h
        for e, x in zip(self.edges, proj):
            sums[x] += Fraction(W[x], e.stabilizer)
        if len(set(sums)) != 1 or sums[0].denominator != 1:
            raise ArithmeticError(f"fiber sums over X_{which} are not constant: {sums}")
        return int(sums[0])

    @property
    def index_K(self) -> int:
        return self.fiber_index("K")

    @property
    def index_Kp(self) -> int:
        return self.fiber_index("Kp")

    @property
    def relative_index(self) -> int:
        """[K':J]_K = [K':J] / gcd([K':J], [K:J])."""
        kp = self.index_Kp
        return kp // gcd(kp, self.index_K)

    def edge_of(self, i: int, key: tuple[int, int]) -> int:
        return self.lookup[(i, key)]

    def line_counts(self) -> list[list[int]]:
        """Number of lines at class i whose neighbor lies in class j."""
        h = self.classes.h
        out = [[0] * h for _ in range(h)]
        for e in self.edges:
            out[e.base][e.target] += len(e.orbit)
        return out

    def hecke(self, r: int) -> IntMatrix:
        """T_r on functions on X_J: (T_r g)(e) = sum over the r-neighbors of the edge e."""
        if r in (self.classes.p, self.q):
            raise ValueError("Hecke operators at level J need r prime to pq")
        if r not in self._hecke:
            self._hecke[r] = _edge_hecke(self, r)
        return self._hecke[r]

    def components(self) -> list[list[int]]:
        """Edges grouped by connected component of the graph on X_K + X_K' with edge set X_J."""
        h = self.classes.h
        adj: dict[tuple[str, int], list[int]] = {}
        for e in self.edges:
            adj.setdefault(("K", e.base), []).append(e.index)
            adj.setdefault(("Kp", e.target), []).append(e.index)
        seen_e = [False] * self.size
        comps = []
        for start in range(self.size):
            if seen_e[start]:
                continue
            comp = []
            dq = deque([start])
            seen_e[start] = True
            while dq:
                x = dq.popleft()
                comp.append(x)
                e = self.edges[x]
                for v in (("K", e.base), ("Kp", e.target)):
                    for y in adj[v]:
                        if not seen_e[y]:
                            seen_e[y] = True
                            dq.append(y)
            comps.append(sorted(comp))
        del h
        return sorted(comps)


def _act(classes: IdealClassSet, i: int, q: int, key, y) -> tuple[int, int]:
    """Line of S*(y/N_i) where S is the sublattice of the line ``key``."""
    ls = classes.line_spaces(q)[i]
    I = ls.ideal
    N = I.norm
    w = I.element(ls.vector(key))
    prod = classes.order.mul(w, y)
    if any(x % N for x in prod):
        raise ArithmeticError("unit action is not integral")
    wy = [x // N for x in prod]
    c = [int(x) % q for x in I.coords(wy)]
    return ls.key_of(c)


def build_level_structure(classes: IdealClassSet, q: int) -> DoubleCosetSpace:
    if q == classes.p:
        raise ValueError("the level-raising prime must differ from p")
    recs = classes.neighbors(q)
    edges: list[Edge] = []
    lookup: dict = {}
    units_all = []
    for i, I in enumerate(classes.reps):
        units = unit_elements(I)
        units_all.append(units)
        if len(units) != classes.weights[i]:
            raise ArithmeticError("unit count disagrees with the class weight")
        target_of = {rec.key: rec.target for rec in recs[i]}
        seen = set()
        for key in line_keys(q):
            if key in seen:
                continue
            images = [_act(classes, i, q, key, y) for y in units]
            orbit = tuple(sorted(set(images)))
            stab = images.count(key)
            if stab * len(orbit) != len(units):
                raise ArithmeticError("orbit-stabilizer count fails")
            targets = {target_of[k] for k in orbit}
            if len(targets) != 1:
                raise ArithmeticError("neighbor class is not constant on a unit orbit")
            e = Edge(len(edges), i, orbit[0], orbit, stab, targets.pop())
            for k in orbit:
                lookup[(i, k)] = e.index
                seen.add(k)
            edges.append(e)
    space = DoubleCosetSpace(classes, q, edges, lookup, units_all)
    space.index_K
    space.index_Kp
    return space


def _edge_hecke(space: DoubleCosetSpace, r: int) -> IntMatrix:
    """For the edge (I_i, S) and each r-neighbor M = I_j x of I_i, the r-neighbor edge is
    (I_j, (M cap S) x^{-1}); modulo q I_j this is r S x^{-1}, with x^{-1} = conj(y) / nrd(M)."""
    classes = space.classes
    order = classes.order
    q = space.q
    nbr_q = classes.neighbors(q)
    nbr_r = classes.neighbors(r)
    ls_q = classes.line_spaces(q)
    n = space.size
    rows = [[0] * n for _ in range(n)]
    for e in space.edges:
        i = e.base
        S = next(rec.lattice for rec in nbr_q[i] if rec.key == e.key)
        for rec in nbr_r[i]:
            j = rec.target
            NM = rec.lattice.norm
            ybar = order.conj(rec.y)
            gens = []
            for s in S.basis:
                v = order.mul(s, ybar)
                if any((r * x) % NM for x in v):
                    raise ArithmeticError("transported edge is not integral")
                gens.append([r * x // NM for x in v])
            key = ls_q[j].key_of_generators(gens)
            rows[e.index][space.edge_of(j, key)] += 1
    return IntMatrix(rows)
