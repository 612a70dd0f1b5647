"""Command-line front end: ``posetturan <subcommand> ...``.

Exit codes: 0 success, 1 a guaranteed property failed, 2 usage or parse
error, 3 resource bound or search budget hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import re
import sys
from pathlib import Path
from typing import Any, Sequence

from . import constructions
from .discharging import full_audit, lym_check, moreempty_check, prefix_set
from .lattice import (
    DomainError,
    Family,
    ResourceError,
    format_family,
    format_set,
    full_set,
    read_family,
    sigma,
    write_family,
)
from .patterns import MODES, contains, parse_pattern
from .search import DEFAULT_BUDGET, conjecture_scan, extremal

log = logging.getLogger("posetturan")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
DEFAULT_SEED = 20190101


class UsageError(Exception):
    pass


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    return str(v)


def render_rows(rows: list[dict[str, Any]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    if not rows:
        return ""
    keys = list(rows[0])
    lines = ["\t".join(keys)]
    lines += ["\t".join(_cell(r[k]) for k in keys) for r in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _split_literal(lit: str, default_mode: str) -> tuple[str, str]:
    if "@" in lit:
        lit, mode = lit.rsplit("@", 1)
        if mode not in MODES:
            raise UsageError(f"unknown mode {mode!r} in {lit}@{mode}")
        return lit, mode
    return lit, default_mode


def infer_k(literals: Sequence[str]) -> int | None:
    """Shaft length of the first Y/Y' literal, or length - 1 of a chain literal."""
    for lit in literals:
        m = re.match(r"^Y'?:(\d+),\d+", lit)
        if m:
            return int(m.group(1))
        m = re.match(r"^Pk?:(\d+)$", lit.split("@")[0])
        if m and int(m.group(1)) >= 2:
            return int(m.group(1)) - 1
    return None


def _int_range(text: str) -> range:
    m = re.fullmatch(r"(\d+)(?:-(\d+))?", text.strip())
    if not m:
        raise UsageError(f"bad range {text!r}; use 'a' or 'a-b'")
    lo = int(m.group(1))
    hi = int(m.group(2) or lo)
    return range(lo, hi + 1)


def cmd_extremal(args: argparse.Namespace) -> int:
    forb = []
    for lit in args.forbid:
        text, mode = _split_literal(lit, args.mode)
        forb.append((parse_pattern(text), mode))
    k = args.k if args.k is not None else infer_k(args.forbid)
    lym_k = None
    if args.lym_prune:
        if k is None:
            raise UsageError("--lym-prune needs --k (or a Y/P pattern to infer it from)")
        lym_k = k
    res = extremal(args.n, forb, budget=args.budget, lym_k=lym_k,
                   symmetry=args.symmetry, workers=args.parallel)
    if args.witness_out:
        write_family(res.witness, args.witness_out)
    ref = sigma(args.n, k) if k is not None and 1 <= k <= args.n + 1 else None
    row = {
        "n": args.n,
        "forbidden": " ".join(f"{p.label}@{m}" for p, m in forb),
        "optimum": res.optimum,
        "sigma": ref,
        "exhaustive": res.exhaustive,
        "nodes": res.nodes_explored,
        "witness": args.witness_out or str(res.witness),
    }
    _emit(render_rows([row], args.format), args.out)
    return EXIT_RESOURCE if res.budget_hit else EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    fam = read_family(args.family)
    rows = []
    for lit in args.pattern:
        text, mode = _split_literal(lit, args.mode)
        p = parse_pattern(text)
        emb = contains(fam, p, mode)
        rows.append({
            "pattern": p.label,
            "mode": mode,
            "present": emb is not None,
            "witness": str(emb) if emb else None,
        })
    _emit(render_rows(rows, args.format), args.out)
    return EXIT_OK


def audit_document(fam: Family, k: int) -> dict[str, Any]:
    rep = full_audit(fam, k)
    spines = [
        {
            "spine": sp.label(),
            "a0": a.a0, "a1": a.a1, "b0": a.b0, "b1": a.b1,
            "direct_sum": a.direct_sum,
            "product_sum": a.product_sum,
            "ok": a.ok,
        }
        for sp, a in rep.spines
    ]
    summary = {
        "eq2_lhs": rep.eq2_lhs,
        "eq2_rhs": rep.eq2_rhs,
        "double_count_lhs": rep.double_count_lhs,
        "double_count_rhs": rep.double_count_rhs,
        "lym_lhs": rep.lym_lhs,
        "lym_rhs": rep.lym_rhs,
        "chains_below_k_minus_1": rep.chains_below_k_minus_1,
        "hypotheses_ok": rep.hypotheses_ok,
        "all_ok": rep.all_ok,
    }
    return {
        "n": fam.n,
        "k": k,
        "spines": spines,
        "summary": summary,
        "warnings": rep.warnings(),
        "violations": rep.violations(),
        "sound": rep.sound,
    }


SPINE_COLUMNS = ("spine", "a0", "a1", "b0", "b1", "direct_sum", "product_sum", "ok")


def render_audit(doc: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    lines = ["\t".join(SPINE_COLUMNS)]
    for row in doc["spines"]:
        lines.append("\t".join(_cell(row[c]) for c in SPINE_COLUMNS))
    for key, val in doc["summary"].items():
        lines.append(f"{key}\t{_cell(val)}")
    for w in doc["warnings"]:
        lines.append(f"warning\t{w}")
    for v in doc["violations"]:
        lines.append(f"violation\t{v}")
    return "\n".join(lines) + "\n"


def parse_audit_tsv(text: str) -> dict[str, Any]:
    """Inverse of the TSV audit rendering (types restored), for consumers and tests."""
    def value(tok: str) -> Any:
        if tok in ("true", "false"):
            return tok == "true"
        try:
            return int(tok)
        except ValueError:
            return tok

    lines = text.rstrip("\n").split("\n")
    header = lines[0].split("\t")
    spines, summary, warnings, violations = [], {}, [], []
    for ln in lines[1:]:
        cells = ln.split("\t")
        if len(cells) == len(header):
            spines.append({h: (c if h == "spine" else value(c)) for h, c in zip(header, cells)})
        elif cells[0] == "warning":
            warnings.append(cells[1])
        elif cells[0] == "violation":
            violations.append(cells[1])
        else:
            summary[cells[0]] = value(cells[1])
    return {"spines": spines, "summary": summary, "warnings": warnings, "violations": violations}


def cmd_audit(args: argparse.Namespace) -> int:
    fam = read_family(args.family)
    doc = audit_document(fam, args.k)
    _emit(render_audit(doc, args.format), args.out)
    for w in doc["warnings"]:
        log.warning(w)
    return EXIT_OK if doc["sound"] else EXIT_FAIL


def cmd_lym(args: argparse.Namespace) -> int:
    fam = read_family(args.family)
    lhs, rhs, holds = lym_check(fam, args.k)
    row = {"n": fam.n, "k": args.k, "size": len(fam), "lym_lhs": lhs, "lym_rhs": rhs,
           "holds": holds, "equality": lhs == rhs}
    _emit(render_rows([row], args.format), args.out)
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    n = args.n
    if args.kind == "middle":
        fam = constructions.middle_levels(n, _need(args.k, "--k"))
    elif args.kind == "equality":
        fam = constructions.equality_case_same_parity(n, _need(args.k, "--k"), args.use_top)
    elif args.kind == "levels":
        lv = tuple(int(t) for t in args.levels.split(",")) if args.levels else ()
        fam = constructions.from_levels(constructions.LevelSpec(n, lv))
    else:
        fam = constructions.random_family(n, args.density, random.Random(args.seed))
    extra = []
    if args.add_empty:
        extra.append(0)
    if args.add_full:
        extra.append(full_set(n))
    if extra:
        fam = fam.with_sets(*extra)
    _emit(format_family(fam), args.out)
    return EXIT_OK


def _need(v: int | None, flag: str) -> int:
    if v is None:
        raise UsageError(f"{flag} is required here")
    return v


def cmd_conjecture(args: argparse.Namespace) -> int:
    rows = conjecture_scan(_int_range(args.k_range), _int_range(args.r_range),
                           _int_range(args.n_range), budget=args.budget, workers=args.parallel)
    table = [
        {"k": r.k, "r": r.r, "n": r.n, "optimum": r.optimum, "sigma": r.sigma,
         "exhaustive": r.exhaustive, "consistent": r.consistent, "nodes": r.nodes}
        for r in rows
    ]
    _emit(render_rows(table, args.format), args.out)
    return EXIT_OK if all(r.exhaustive for r in rows) else EXIT_RESOURCE


def cmd_moreempty(args: argparse.Namespace) -> int:
    js = [int(t) for t in args.g.split(",")] if args.g else []
    if any(not 1 <= j < args.n for j in js):
        raise UsageError(f"prefix lengths must lie in [1, {args.n - 1}]")
    g = [prefix_set(j) for j in js]
    res = moreempty_check(args.n, g)
    row = {"n": args.n, "G": " ".join(format_set(s) for s in g) or "{}",
           "avoiding": res.avoiding, "hitting": res.hitting, "injection_ok": res.injection_ok}
    _emit(render_rows([row], args.format), args.out)
    return EXIT_OK if res.injection_ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="posetturan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extremal", parents=[common], help="exact La / La# by branch and bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--forbid", action="append", required=True,
                   help="pattern literal, optionally suffixed @weak/@induced; repeatable")
    p.add_argument("--mode", choices=MODES, default="induced")
    p.add_argument("--k", type=int, help="reference k for Sigma(n,k) and --lym-prune")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--lym-prune", action="store_true")
    p.add_argument("--symmetry", action="store_true", help="fix the first chosen set to {1..i}")
    p.add_argument("--parallel", type=int, default=1, metavar="WORKERS")
    p.add_argument("--witness-out")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("check", parents=[common], help="pattern containment in a family file")
    p.add_argument("--family", required=True)
    p.add_argument("--pattern", action="append", required=True)
    p.add_argument("--mode", choices=MODES, default="induced")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("audit", parents=[common], help="discharging audit of a family file")
    p.add_argument("--family", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("lym", parents=[common], help="integer LYM check of a family file")
    p.add_argument("--family", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_lym)

    p = sub.add_parser("construct", parents=[common], help="write a level-union or random family")
    p.add_argument("kind", choices=("middle", "equality", "levels", "random"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--use-top", action="store_true")
    p.add_argument("--levels", help="comma-separated level indices")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--add-empty", action="store_true")
    p.add_argument("--add-full", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("conjecture", parents=[common], help="scan La#(n,{Y_kr, Y'_kr}) vs Sigma(n,k)")
    p.add_argument("--k-range", default="2-3")
    p.add_argument("--r-range", default="2-3")
    p.add_argument("--n-range", default="3-4")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--parallel", type=int, default=1, metavar="WORKERS")
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("moreempty", parents=[common], help="prefix-chain counting and swap injection")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", default="", help="comma-separated prefix lengths j for {1..j}")
    p.set_defaults(func=cmd_moreempty)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
