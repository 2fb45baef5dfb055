"""Congruence of Satake parameters modulo ell, up to the Weyl group.

Half-integral powers of q are cleared by multiplying every entry by q^twist; the twist
is recorded on the parameter. For the unramified constituents of the type Va and VIa
principal series the parameter depends on one unknown unit s = sigma(uniformizer);
every target entry lies in F_ell, so a solution forces s into F_ell and it suffices to
search s over F_ell^x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from sympy import primerange


class SatakeError(ValueError):
    pass


@dataclass(frozen=True)
class SatakeParam:
    kind: str
    entries: tuple[int, ...]
    twist: Fraction = Fraction(0)

    def __post_init__(self):
        n = {"GSp4": 4, "GL3": 3, "U3": 3}.get(self.kind)
        if n is None or len(self.entries) != n:
            raise SatakeError(f"{self.kind} parameters have {n} entries")

    def pairing_ok(self, ell: int | None = None) -> bool:
        if self.kind != "GSp4":
            return True
        t = self.entries
        a, b = t[0] * t[3], t[1] * t[2]
        return a == b if ell is None else (a - b) % ell == 0

    def to_json(self) -> dict:
        return {"kind": self.kind, "entries": list(self.entries), "twist": str(self.twist)}


def weyl_group(kind: str) -> list[tuple[int, ...]]:
    """Permutations of positions: S_3, or the 8 permutations of four positions preserving {1,4},{2,3}."""
    if kind in ("GL3", "U3"):
        return sorted(permutations(range(3)))
    if kind == "GSp4":
        pairs = {frozenset((0, 3)), frozenset((1, 2))}
        return sorted(p for p in permutations(range(4))
                      if {frozenset((p[0], p[3])), frozenset((p[1], p[2]))} == pairs)
    raise SatakeError(f"unknown kind {kind!r}")


def satake_congruence_check(param: SatakeParam, target: SatakeParam, ell: int) -> bool:
    """Some Weyl element carries param to target entrywise mod ell."""
    if param.kind != target.kind:
        raise SatakeError("parameters of different groups")
    if param.twist != target.twist:
        raise SatakeError("parameters carry different twists")
    for w in weyl_group(param.kind):
        if all((param.entries[w[i]] - target.entries[i]) % ell == 0 for i in range(len(w))):
            return True
    return False


TYPES = ("Va", "VIa")
TWIST = Fraction(3, 2)


def trivial_parameter(q: int) -> SatakeParam:
    """The trivial representation, normalized as diag(q^-3/2, q^-1/2, q^1/2, q^3/2), times q^3/2."""
    return SatakeParam("GSp4", (1, q, q * q, q ** 3), TWIST)


def type_parameter(type_: str, q: int, s: int) -> SatakeParam:
    """Unramified constituent of the type's principal series, times q^3/2; xi_0 of the uniformizer is -1."""
    if type_ == "Va":
        return SatakeParam("GSp4", (q * s, -q * s, -q * q * s, q * q * s), TWIST)
    if type_ == "VIa":
        return SatakeParam("GSp4", (q * s, q * s, q * q * s, q * q * s), TWIST)
    raise SatakeError(f"no parameter family for type {type_!r}")


@dataclass(frozen=True)
class TypeCheck:
    type: str
    q: int
    ell: int
    solvable: bool
    witnesses: tuple[tuple[int, tuple[int, ...]], ...]
    predicted: bool

    def to_json(self) -> dict:
        return {"type": self.type, "q": self.q, "ell": self.ell, "twist": str(TWIST), "solvable": self.solvable,
                "witnesses": [{"s": s, "weyl": list(w)} for s, w in self.witnesses],
                "closed_form": self.predicted, "agree": self.solvable == self.predicted}


def closed_form(type_: str, q: int, ell: int) -> bool:
    if type_ == "Va":
        return (q + 1) % ell == 0 or (q * q + 1) % ell == 0
    if type_ == "VIa":
        return (q * q - 1) % ell == 0
    raise SatakeError(f"no closed form for type {type_!r}")


def type_congruence(type_: str, q: int, ell: int) -> TypeCheck:
    """Search s in F_ell^x and the Weyl group for a congruence with the trivial parameter."""
    if q % ell == 0:
        raise SatakeError(f"ell = {ell} divides q = {q}; the twist by q^(3/2) is not invertible")
    target = trivial_parameter(q)
    witnesses = []
    for s in range(1, ell):
        p = type_parameter(type_, q, s)
        for w in weyl_group("GSp4"):
            if all((p.entries[w[i]] - target.entries[i]) % ell == 0 for i in range(4)):
                witnesses.append((s, w))
    return TypeCheck(type_, q, ell, bool(witnesses), tuple(witnesses), closed_form(type_, q, ell))


def exhaustive_case_analysis(ell_max: int = 50, q_max: int = 20) -> list[TypeCheck]:
    out = []
    for type_ in TYPES:
        for ell in primerange(2, ell_max + 1):
            for q in primerange(2, q_max + 1):
                if q % ell:
                    out.append(type_congruence(type_, q, ell))
    return out
