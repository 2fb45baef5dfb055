"""Command-line entry point.

Exit status: 0 on success, 1 when an input violates a hypothesis (or is outside the
supported range), 2 when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from sympy import isprime

EXIT_OK, EXIT_HYPOTHESIS, EXIT_INVARIANT = 0, 1, 2

HYPOTHESES = """\
hypotheses enforced by raise-level (each failure exits with status 1):
  p, q, ell are primes, q != p, and ell does not divide q * [K':J]_K, where
    [K':J]_K = [K':J] / gcd([K':J], [K:J]) is computed from weighted fiber sizes.
  star criterion: eta_f(e_{K,K'}) = eta_1(e_{K,K'}) mod lambda, with
    e_{K,K'} = [K:J][K':J]_K e_K e_K' e_K; for these spaces this is
    a_q^2 = (1+q)^2 mod lambda.
  f is not abelian mod lambda: a_r(f) is not congruent to chi(r)(1 + r) for all
    r <= rbound, r != p, with chi trivial or the quadratic character mod p
    ("abelian mod ell: Eisenstein congruence detected").
  two places: at least two primes v with ell prime to v(v^2 - 1), the order of
    the reduction of the maximal compact at v.
The level-J congruence is then searched at every prime r <= rbound prime to pq.
"""


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# ------------------------------------------------------------------ serialization


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if x == float("inf"):
            return "inf"
        return x
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "to_json"):
        return _plain(x.to_json())
    return x


def _dump_json(obj) -> str:
    return json.dumps(_plain(obj), indent=2, ensure_ascii=False) + "\n"


def _dump_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([json.dumps(_plain(v)) if isinstance(v, (list, dict)) else _plain(v) for v in r])
    return buf.getvalue()


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "output", "report_dir"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _require_prime(name: str, n: int) -> None:
    if not isprime(n):
        raise CliError(f"{name} = {n} is not prime", EXIT_HYPOTHESIS)


# ------------------------------------------------------------------ subcommands


def cmd_brandt(args) -> tuple[str, dict]:
    from .level.instance import classes_for
    from .quaternion.brandt import brandt_matrices

    _require_prime("p", args.p)
    if args.nmax < 1:
        raise CliError("nmax must be positive", EXIT_HYPOTHESIS)
    classes = classes_for(args.p)
    mats = brandt_matrices(classes, args.nmax)
    entries = {n: [list(r) for r in m.rows] for n, m in sorted(mats.items())}
    if args.report_dir:
        from .report import brandt_figure
        brandt_figure(args.p, entries, Path(args.report_dir))
    if args.out == "csv":
        rows = [(n, i, j, v) for n, m in entries.items() for i, r in enumerate(m) for j, v in enumerate(r)]
        return _dump_csv(["n", "i", "j", "value"], rows), {}
    out = {"p": args.p, "h": classes.h, "weights": list(classes.weights),
           "matrices": [{"n": n, "entries": m} for n, m in entries.items()],
           "seed": args.seed, "config": _config(args)}
    return _dump_json(out), {}


def _system_entry(inst, form, system):
    from .exact.valuation import INF
    from .level.instance import abelian_test, star_criterion

    crit = star_criterion(inst, form, system)
    ab, chi = abelian_test(system, inst.p, inst.rbound)

    def num(v):
        return None if v is None else ("inf" if v == INF else int(v))

    return {
        "form": form.index, "degree": form.degree, "eisenstein": form.eisenstein,
        "system": system.to_json(), "star_holds": crit["holds"], "vm": num(crit["vm"]),
        "m": str(crit["m"]) if "m" in crit else None, "n0_star": num(crit["n0_star"]),
        "abelian": ab, "abelian_character": chi,
    }, crit


def cmd_raise_level(args) -> tuple[str, dict]:
    from .exact.valuation import INF
    from .level.instance import HypothesisViolation, LevelRaisingInstance, valuation_bound_for_form, raise_level, two_places

    for name in ("p", "q", "ell"):
        _require_prime(name, getattr(args, name))
    try:
        inst = LevelRaisingInstance(args.p, args.q, args.rbound)
    except HypothesisViolation as exc:
        raise CliError(str(exc), EXIT_HYPOTHESIS) from exc
    ell = args.ell
    if (inst.q * inst.relative_index) % ell == 0:
        raise CliError(f"ell = {ell} divides q [K':J]_K = {inst.q * inst.relative_index}", EXIT_HYPOTHESIS)
    witnesses = two_places(inst.p, ell)
    entries = []
    raised = None
    violations = []
    for form in inst.old_forms:
        for system in form.reductions(ell):
            entry, crit = _system_entry(inst, form, system)
            entry["new_congruent"] = []
            entries.append(entry)
            if not crit["holds"]:
                continue
            if entry["abelian"]:
                violations.append(f"abelian mod {ell}: Eisenstein congruence detected")
                continue
            if len(witnesses) < 2:
                violations.append(f"fewer than two places v with {ell} prime to v(v^2 - 1)")
                continue
            n0 = crit["n0_star"]
            if form.rational:
                rep = valuation_bound_for_form(inst, form, ell)
                entry["bound"] = rep.to_json()
                n0 = rep.n0
            res = raise_level(inst, form, system, n0)
            entry["n0"] = None if n0 is None else ("inf" if n0 == INF else int(n0))
            entry["new_congruent"] = [dict(es.to_json(), multiplicity=d) for es, d in res.congruent]
            entry["kernel_dim"] = res.kernel_dim
            entry["verified"] = res.verified
            entry["verified_mod_power"] = res.verified_mod_power
            if not res.congruent:
                raise CliError("a congruence was predicted but none was found at level J", EXIT_INVARIANT)
            if raised is None:
                raised = entry
    base = {"p": args.p, "q": args.q, "ell": ell, "rbound": args.rbound, "two_places": witnesses,
            "old_eigensystems": entries}
    if raised is None:
        msg = violations[0] if violations else "star criterion fails for every old eigensystem"
        base.update({"star_holds": bool(violations), "abelian": any(e["abelian"] for e in entries),
                     "m": None, "n0": None, "new_congruent": [], "error": msg,
                     "seed": args.seed, "config": _config(args)})
        return _dump_json(base), {"error": msg, "code": EXIT_HYPOTHESIS}
    base.update({"raised_form": raised["form"], "star_holds": raised["star_holds"], "abelian": raised["abelian"],
                 "m": raised["m"], "n0": raised["n0"], "new_congruent": raised["new_congruent"],
                 "seed": args.seed, "config": _config(args)})
    return _dump_json(base), {}


def cmd_ihara_check(args) -> tuple[str, dict]:
    from .level.ihara import ihara_check
    from .level.instance import HypothesisViolation, LevelRaisingInstance

    _require_prime("p", args.p)
    _require_prime("q", args.q)
    try:
        inst = LevelRaisingInstance(args.p, args.q, args.rbound)
    except HypothesisViolation as exc:
        raise CliError(str(exc), EXIT_HYPOTHESIS) from exc
    out = ihara_check(inst, args.trials, args.seed)
    out["config"] = _config(args)
    status = {}
    if out["failed"] or out["kernel_dim_by_rank"] != out["kernel_dim_by_components"]:
        status = {"error": "integral decomposition failed", "code": EXIT_INVARIANT}
    if args.out == "csv":
        keys = ["p", "q", "trials", "seed", "passed", "failed", "ihara_constant",
                "kernel_dim_by_rank", "kernel_dim_by_components", "max_radius"]
        return _dump_csv(keys, [[out[k] for k in keys]]), status
    return _dump_json(out), status


def cmd_tables(args) -> tuple[str, dict]:
    from .local import parahoric_indices
    from .local.groups import GroupTooLarge

    group = {"gl3": "GL3", "gsp4": "GSp4", "u3": "U3"}[args.group]
    q = args.q
    if q < 2:
        raise CliError("q must be at least 2", EXIT_HYPOTHESIS)
    try:
        indices = parahoric_indices(group, q)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_HYPOTHESIS) from exc
    out: dict = {"group": group, "q": q, "indices": indices.to_json(), "index_conflicts":
                 {k: list(v) for k, v in indices.conflicts().items()}}
    status: dict = {}
    if group == "U3":
        from .local.iwahori import iwahori_rank1_characters, module_report, u3_unipotent_relation_solve
        out["iwahori_characters"] = iwahori_rank1_characters(q)
        out["reducibility"] = [module_report(q, a).to_json() for a in (q * q, -q)]
        out["unipotent_solve"] = u3_unipotent_relation_solve(q).to_json()
        if args.out == "csv":
            rows = [(n, c["T"], c["T'"], c["T_K"], c["T_K'"], c["relations"])
                    for n, c in out["iwahori_characters"].items()]
            return _dump_csv(["character", "T", "T'", "T_K", "T_K'", "relations"], rows), status
        out.update({"seed": args.seed, "config": _config(args)})
        return _dump_json(out), status

    from .local.tables import COLUMNS, classify, family_sums, load_table
    rows = load_table(group)
    out["table"] = [r.to_json() for r in rows]
    out["classification"] = {
        "new_vectors": classify(group, new_vectors=True),
        "new_vectors_unitary": classify(group, new_vectors=True, require_unitary=True),
    }
    out["family_sums"] = [{"family": list(f), "sum": list(s), "equals_row_I": ok} for f, s, ok in family_sums(group)]
    if args.verify_golden:
        from .local.verify import verify_golden
        try:
            checks = verify_golden(group, q)
        except GroupTooLarge as exc:
            raise CliError(str(exc), EXIT_HYPOTHESIS) from exc
        out["checks"] = [c.to_json() for c in checks]
        out["all_checks_pass"] = all(c.ok for c in checks)
        if not out["all_checks_pass"]:
            status = {"error": "golden table verification failed", "code": EXIT_INVARIANT}
    if args.report_dir:
        from .report import table_figure
        table_figure(group, COLUMNS[group], [(r.type, r.dims) for r in rows], Path(args.report_dir))
    if args.out == "csv":
        header = ["type", "remarks", *COLUMNS[group], "unitary", "tempered", "generic", "square integrable"]
        body = [(r.type, r.remarks, *r.dims, int(r.unitary), int(r.tempered), int(r.generic), int(r.square_integrable))
                for r in rows]
        return _dump_csv(header, body), status
    out.update({"seed": args.seed, "config": _config(args)})
    return _dump_json(out), status


def cmd_satake_check(args) -> tuple[str, dict]:
    from .local.satake import SatakeError, type_congruence

    _require_prime("ell", args.ell)
    try:
        res = type_congruence(args.type, args.q, args.ell)
    except SatakeError as exc:
        raise CliError(str(exc), EXIT_HYPOTHESIS) from exc
    out = dict(res.to_json(), group="GSp4", seed=args.seed, config=_config(args))
    status = {}
    if not out["agree"]:
        status = {"error": "brute force disagrees with the closed form", "code": EXIT_INVARIANT}
    if args.out == "csv":
        keys = ["type", "q", "ell", "twist", "solvable", "closed_form", "agree"]
        return _dump_csv(keys, [[out[k] for k in keys]]), status
    return _dump_json(out), status


def cmd_grid_search(args) -> tuple[str, dict]:
    from .level.grid import grid_search

    for name in ("p", "q", "ell"):
        for v in getattr(args, name):
            _require_prime(name, v)
    results = grid_search(args.p, args.q, args.ell, args.rbound, args.workers)
    failures = [row for r in results for row in r["rows"] if row["eligible"] and not row["new_congruent"]]
    if args.report_dir:
        from .report import grid_figure
        grid_figure(results, Path(args.report_dir))
    status = {}
    if failures:
        status = {"error": f"{len(failures)} eligible instances without a congruent new eigensystem",
                  "code": EXIT_INVARIANT}
    if args.out == "csv":
        keys = ["p", "q", "ell", "form", "degree", "eisenstein", "k", "star", "vm", "n0_star", "classical",
                "abelian", "two_places_ok", "eligible", "n0", "kernel_dim", "verified", "verified_mod_power",
                "congruence_module", "ell_divides_module"]
        rows = [[row.get(k) for k in keys] for r in results for row in r["rows"]]
        return _dump_csv(keys, rows), status
    out = {"results": results, "seed": args.seed, "config": _config(args)}
    return _dump_json(out), status


# ------------------------------------------------------------------ parser


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levelraise",
        description="Level-raising congruences for definite quaternion algebras and finite models "
                    "of the local representation theory.",
        epilog=HYPOTHESES + "\nexit status: 0 ok, 1 hypothesis violation or unsupported input, "
                            "2 internal invariant failure",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed, recorded in the output (default 0)")
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("--report-dir", help="also render PNG figures into this directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("brandt", parents=[common], help="Brandt matrices of the maximal order ramified at p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--out", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_brandt)

    p = sub.add_parser("raise-level", parents=[common], help="search for new eigensystems congruent to old ones",
                       epilog=HYPOTHESES, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True, help="the level-raising prime")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--rbound", type=int, default=50, help="compare eigenvalues at primes r <= rbound (default 50)")
    p.add_argument("--out", choices=["json"], default="json")
    p.set_defaults(func=cmd_raise_level)

    p = sub.add_parser("ihara-check", parents=[common],
                       help="random integral functions in the image of delta have integral preimages")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--rbound", type=int, default=50)
    p.add_argument("--out", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_ihara_check)

    p = sub.add_parser("tables", parents=[common], help="parahoric indices and fixed-space dimension tables")
    p.add_argument("--group", choices=["gl3", "gsp4", "u3"], required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--verify-golden", action="store_true", help="recompute every entry with a finite model")
    p.add_argument("--out", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("satake-check", parents=[common],
                       help="is the type's unramified constituent congruent to the trivial representation mod ell")
    p.add_argument("--group", choices=["gsp4"], default="gsp4")
    p.add_argument("--type", choices=["Va", "VIa"], required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--out", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_satake_check)

    p = sub.add_parser("grid-search", parents=[common], help="run every (p, q, ell) instance of a grid")
    p.add_argument("--p", type=_int_list, default=[11, 23, 29, 31])
    p.add_argument("--q", type=_int_list, default=[2, 3, 5, 7])
    p.add_argument("--ell", type=_int_list, default=[3, 5, 7, 11, 13])
    p.add_argument("--rbound", type=int, default=50)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_grid_search)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        text, status = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=stderr)
        return exc.code
    except (ArithmeticError, AssertionError) as exc:
        print(f"invariant failure: {exc}", file=stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_HYPOTHESIS
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    if status:
        print(f"error: {status['error']}", file=stderr)
        return status["code"]
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
