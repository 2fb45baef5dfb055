"""Fixed vectors of parabolically induced representations of G(F_q) under a parahoric shape.

For tau a representation of the Levi M_P inflated to P,
    dim Ind_P^G(tau)^H = sum over P-orbits O on G/H of dim tau^{Stab_P(x)}, x in O.
Trivial tau contributes 1 per orbit. The Steinberg representation of a GL(2) factor is
functions on P^1 modulo constants, so a subgroup S contributes (#S-orbits on P^1) - 1;
#Stab_P(x)-orbits on P^1 equals #P-orbits on P^1 x O, which needs only generators of P.
"""

from __future__ import annotations

from collections import deque
from itertools import product

from .groups import Flag, FiniteMatrixGroup, ParahoricShape, coset_space, orbits, rref, shape

TAUS = ("trivial", "steinberg")

# (dim V_lo, dim V_hi): the GL(2) factor of the Levi acts on lines between V_lo and V_hi
_GL2_FACTOR = {("GL3", "J"): (0, 2), ("GSp4", "J'"): (0, 2), ("GSp4", "J"): (1, 3)}


def projective_line(G: FiniteMatrixGroup, lo: int, hi: int) -> list[Flag]:
    F = G.F
    n = G.n
    base = [tuple(1 if t == i else 0 for t in range(n)) for i in range(lo)]
    pts = set()
    for a, b in product(range(F.q), repeat=2):
        if a == 0 and b == 0:
            continue
        v = [0] * n
        v[lo], v[lo + 1] = a, b
        pts.add((rref(F, base + [tuple(v)]),))
    if hi - lo != 2:
        raise ValueError("the Levi factor is not GL(2)")
    return sorted(pts)


def _pair_orbit_count(G: FiniteMatrixGroup, gens, line_pts: list[Flag], orbit: list[Flag]) -> int:
    seen: set = set()
    count = 0
    for start in ((x, y) for x in line_pts for y in orbit):
        if start in seen:
            continue
        count += 1
        seen.add(start)
        dq = deque([start])
        while dq:
            x, y = dq.popleft()
            for g in gens:
                z = (G.apply_flag(g, x), G.apply_flag(g, y))
                if z not in seen:
                    seen.add(z)
                    dq.append(z)
    return count


def induced_fixed_dim(G: FiniteMatrixGroup, P: ParahoricShape, tau: str, H: ParahoricShape) -> int:
    if tau not in TAUS:
        raise ValueError(f"unsupported Levi representation {tau!r}; use one of {TAUS}")
    gens = P.generators(G)
    P_orbits = orbits(G, gens, coset_space(G, H))
    if tau == "trivial":
        return len(P_orbits)
    key = (G.kind, P.name)
    if key not in _GL2_FACTOR:
        raise ValueError(f"{P.name} in {G.kind} has no GL(2) Levi factor")
    line_pts = projective_line(G, *_GL2_FACTOR[key])
    return sum(_pair_orbit_count(G, gens, line_pts, O) - 1 for O in P_orbits)


def induced_row(G: FiniteMatrixGroup, parabolic: str, tau: str, columns: list[str]) -> tuple[int, ...]:
    P = shape(G.kind, parabolic)
    return tuple(induced_fixed_dim(G, P, tau, shape(G.kind, c)) for c in columns)
