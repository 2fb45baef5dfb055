"""Grid search over (p, q, ell): every old eigensystem mod ell, its hypotheses and the raised-level check."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable

from ..exact.valuation import INF
from .instance import (
    LevelRaisingInstance,
    abelian_test,
    classical_test,
    valuation_bound_for_form,
    instance_congruence_module,
    raise_level,
    star_criterion,
    two_places,
)

DEFAULT_P = (11, 23, 29, 31)
DEFAULT_Q = (2, 3, 5, 7)
DEFAULT_ELL = (3, 5, 7, 11, 13)


def _num(x):
    if x is None:
        return None
    if x == INF:
        return "inf"
    return int(x)


def instance_rows(p: int, q: int, ells: Iterable[int], rbound: int = 50) -> dict:
    """All rows for one (p, q), plus instance-level checks."""
    inst = LevelRaisingInstance(p, q, rbound)
    info = {
        "p": p, "q": q, "dim_J": inst.X.size, "dim_new": len(inst.new_lattice),
        "index_K": inst.k, "index_Kp": inst.kp, "relative_index": inst.relative_index,
        "block_identity": inst.block_identity_holds(), "E": inst.setup.E, "C": inst.setup.C,
    }
    rows = []
    module = None
    for ell in ells:
        if (q * inst.relative_index) % ell == 0:
            continue
        witnesses = two_places(p, ell)
        for form in inst.old_forms:
            for system in form.reductions(ell):
                crit = star_criterion(inst, form, system)
                ab, chi = abelian_test(system, p, rbound)
                row = {
                    "p": p, "q": q, "ell": ell, "form": form.index, "degree": form.degree,
                    "eisenstein": form.eisenstein, "k": system.k,
                    "a_q": system[q].to_json(),
                    "star": crit["holds"], "vm": _num(crit["vm"]), "n0_star": _num(crit["n0_star"]),
                    "classical": classical_test(system, q), "ell_divides_q_plus_1": (q + 1) % ell == 0,
                    "abelian": ab, "abelian_character": chi,
                    "two_places": witnesses, "two_places_ok": len(witnesses) >= 2,
                }
                eligible = bool(crit["holds"]) and not ab and len(witnesses) >= 2
                row["eligible"] = eligible
                if eligible:
                    n0 = None
                    if form.rational:
                        rep = valuation_bound_for_form(inst, form, ell)
                        n0 = rep.n0
                        row["bound"] = rep.to_json()
                    res = raise_level(inst, form, system, n0, check_hypotheses=False)
                    if module is None:
                        module = instance_congruence_module(inst)
                    row.update({
                        "n0": _num(n0 if n0 is not None else crit["n0_star"]),
                        "new_congruent": [dict(es.to_json(), multiplicity=dim) for es, dim in res.congruent],
                        "kernel_dim": res.kernel_dim,
                        "verified": res.verified,
                        "verified_mod_power": res.verified_mod_power,
                        "congruence_module": list(module.invariant_factors),
                        "ell_divides_module": any(x % ell == 0 for x in module.invariant_factors),
                    })
                rows.append(row)
    return {"instance": info, "rows": rows}


def _task(args):
    p, qs, ells, rbound = args
    return [instance_rows(p, q, ells, rbound) for q in qs if q != p]


def grid_search(ps: Iterable[int] = DEFAULT_P, qs: Iterable[int] = DEFAULT_Q, ells: Iterable[int] = DEFAULT_ELL,
                rbound: int = 50, workers: int | None = None) -> list[dict]:
    """Instances fan out by p (class data is shared across q); results come back in sorted order."""
    ps, qs, ells = sorted(set(ps)), sorted(set(qs)), sorted(set(ells))
    tasks = [(p, qs, ells, rbound) for p in ps]
    workers = workers or min(len(tasks), os.cpu_count() or 1)
    if workers <= 1 or len(tasks) <= 1:
        results = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks))
    out = [r for chunk in results for r in chunk]
    out.sort(key=lambda r: (r["instance"]["p"], r["instance"]["q"]))
    return out
