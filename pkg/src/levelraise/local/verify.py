"""Recompute every golden table entry that has a finite model and compare."""

from __future__ import annotations

from dataclasses import dataclass

from .groups import FiniteMatrixGroup, classical_order, double_coset_count, is_closed, shape, shape_names
from .induced import induced_row
from .parahoric import weyl_fixed_dim
from .tables import COLUMNS, family_sums, row

# (row type, parabolic, Levi representation) realizable in G(F_q)
INDUCED_ROWS = {
    "GL3": (("IIa", "J", "steinberg"), ("IIb", "J", "trivial")),
    "GSp4": (("IIa", "J'", "steinberg"), ("IIb", "J'", "trivial"),
             ("IIIa", "J", "steinberg"), ("IIIb", "J", "trivial")),
}


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    observed: object

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def to_json(self) -> dict:
        return {"check": self.name, "expected": self.expected, "observed": self.observed, "ok": self.ok}


def _project(kind: str, columns: list[str], dims: tuple[int, ...]) -> tuple[int, ...]:
    full = COLUMNS[kind]
    return tuple(dims[full.index(c)] for c in columns)


def verify_golden(kind: str, q: int) -> list[Check]:
    G = FiniteMatrixGroup(kind, q)
    finite_cols = shape_names(kind)
    ordered = [c for c in COLUMNS[kind] if c in finite_cols]
    checks = [Check(f"|{kind}(F_{q})|", classical_order(kind, q), G.order)]
    for name in finite_cols:
        checks.append(Check(f"{name} is a subgroup", True, is_closed(G, shape(kind, name))))
    B = shape(kind, "I")
    observed = tuple(double_coset_count(G, B, shape(kind, c)) for c in ordered)
    checks.append(Check(f"row I via |B\\G/H|, H in {ordered}", _project(kind, ordered, row(kind, "I").dims), observed))
    weyl_cols = list(COLUMNS[kind])
    checks.append(Check("row I via |W/W_S|", row(kind, "I").dims, tuple(weyl_fixed_dim(kind, c) for c in weyl_cols)))
    for t, parabolic, tau in INDUCED_ROWS[kind]:
        checks.append(Check(f"row {t} via {tau} induced from {parabolic}, columns {ordered}",
                            _project(kind, ordered, row(kind, t).dims), induced_row(G, parabolic, tau, ordered)))
    for fam, s, _ in family_sums(kind):
        checks.append(Check(f"sum of {'+'.join(fam)} equals row I", row(kind, "I").dims, s))
    return checks
