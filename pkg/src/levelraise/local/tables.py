"""Golden fixed-space dimension tables for GL(3) and GSp(4), their consistency, and classification queries."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

COLUMNS = {"GL3": ("K", "J", "I"), "GSp4": ("K", "K'", "J", "J'", "I")}
_DIM_FILE = {"GL3": "table_b.csv", "GSp4": "table_d.csv"}
_REP_FILE = {"GL3": "table_a.csv", "GSp4": "table_c.csv"}

# Rows grouped by the principal series they are constituents of; each group sums to row I.
FAMILIES = {
    "GL3": (("IIa", "IIb"), ("IIIa", "IIIb", "IIIc", "IIId")),
    "GSp4": (("IIa", "IIb"), ("IIIa", "IIIb"), ("IVa", "IVb", "IVc", "IVd"),
             ("Va", "Vb", "Vc", "Vd"), ("VIa", "VIb", "VIc", "VId")),
}


@dataclass(frozen=True)
class TableRow:
    kind: str
    type: str
    representation: str
    remarks: str
    dims: tuple[int, ...]
    unitary: bool
    tempered: bool
    generic: bool
    square_integrable: bool

    def dim(self, column: str) -> int:
        if column == "K'" and self.kind == "GL3":
            # every maximal compact of GL(3) is conjugate to K
            column = "K"
        return self.dims[COLUMNS[self.kind].index(column)]

    def to_json(self) -> dict:
        return {"type": self.type, "representation": self.representation, "remarks": self.remarks,
                "dims": dict(zip(COLUMNS[self.kind], self.dims)), "unitary": self.unitary,
                "tempered": self.tempered, "generic": self.generic, "square_integrable": self.square_integrable}


def _read(name: str) -> list[dict[str, str]]:
    text = resources.files(__package__).joinpath("data", name).read_text(encoding="utf-8")
    return list(csv.DictReader(text.splitlines()))


def raw_csv(kind: str) -> str:
    return resources.files(__package__).joinpath("data", _DIM_FILE[kind]).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_table(kind: str) -> tuple[TableRow, ...]:
    if kind not in COLUMNS:
        raise ValueError(f"no table for {kind!r}")
    reps = {r["type"]: r for r in _read(_REP_FILE[kind])}
    flags = {r["type"]: r for r in _read("flags.csv") if r["kind"] == kind}
    rows = []
    for r in _read(_DIM_FILE[kind]):
        t = r["type"]
        rows.append(TableRow(
            kind, t, r["representation"], r["remarks"],
            tuple(int(r[c]) for c in COLUMNS[kind]),
            unitary=r["remarks"] != "not unitary",
            tempered=bool(reps[t]["tempered"]),
            generic=flags[t]["generic"] == "1",
            square_integrable=flags[t]["square integrable"] == "1",
        ))
    return tuple(rows)


def row(kind: str, type_: str) -> TableRow:
    return next(r for r in load_table(kind) if r.type == type_)


def family_sums(kind: str) -> list[tuple[tuple[str, ...], tuple[int, ...], bool]]:
    """Columnwise sum of each family against row I."""
    full = row(kind, "I").dims
    out = []
    for fam in FAMILIES[kind]:
        s = tuple(sum(col) for col in zip(*(row(kind, t).dims for t in fam)))
        out.append((fam, s, s == full))
    return out


def classify(kind: str, observed: dict[str, int] | None = None, *, require_unitary: bool = False,
             new_vectors: bool = False) -> list[str]:
    """Table rows matching the observed dimensions (any subset of columns) and optional constraints.

    ``new_vectors`` asks for dim^J > dim^K + dim^K', i.e. J-fixed vectors beyond the old ones.
    """
    out = []
    for r in load_table(kind):
        if observed and any(r.dim(c) != v for c, v in observed.items()):
            continue
        if require_unitary and not r.unitary:
            continue
        if new_vectors and not r.dim("J") > r.dim("K") + r.dim("K'"):
            continue
        out.append(r.type)
    return out
