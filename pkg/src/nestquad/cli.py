"""Command-line interface: ``nestquad <command> [options]``.

Exit codes: 0 success, 2 usage or validation error, 3 algorithmic failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import cubature as cb
from .distributions import parse_distribution
from .experiments import METHODS, condition_series, count_row, ladder
from .genz import convergence_study
from .io import RuleFile, table_csv, to_csv
from .linalg import KernelError
from .quadrature import QuadratureRule, clenshaw_curtis_rule, gauss_rule
from .reduce1d import NestedFamily, ReductionCriterion, ReductionError, reduction_step
from .smolyak import level_source, smolyak_rule

log = logging.getLogger("nestquad")

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _invocation(argv) -> dict:
    return {"command": "nestquad " + " ".join(argv)}


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, newline="")
    else:
        sys.stdout.write(text)


def _write_payload(payload, meta, out: Optional[str], fmt: str) -> None:
    rf = RuleFile(payload, meta)
    if out and Path(out).suffix == ".csv":
        fmt = "csv"
    _emit(to_csv(payload, meta) if fmt == "csv" else rf.dumps(), out)


def _dist(text: str):
    try:
        return parse_distribution(text)
    except ValueError as exc:
        raise UsageError(f"bad --dist {text!r}: {exc}") from None


def _load(path: str):
    try:
        return RuleFile.load(path).payload
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


# -- commands ----------------------------------------------------------------------

def cmd_quad(args, meta) -> int:
    dist = _dist(args.dist)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    make = {"gauss": gauss_rule, "cc": clenshaw_curtis_rule, "clenshaw_curtis": clenshaw_curtis_rule}[args.kind]
    try:
        rule = make(dist, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = rule if args.dim == 1 else cb.tensor_rule([rule] * args.dim)
    _write_payload(payload, meta, args.out, args.format)
    return EXIT_OK


def _report_step(old, new) -> None:
    w = new.weights
    log.info("%d -> %d nodes, weights in [%.6g, %.6g]", len(old), len(new), w.min(), w.max())
    if isinstance(new, QuadratureRule):
        log.info("  removed %s", new.meta.get("removed"))


def cmd_reduce(args, meta) -> int:
    rule = _load(args.input)
    if isinstance(rule, NestedFamily):
        rule = rule[-1]
    crit = ReductionCriterion(args.criterion)
    meta = dict(meta, criterion=args.criterion, mode=args.mode)
    if isinstance(rule, QuadratureRule):
        if args.mode == "negative":
            raise UsageError("--mode negative applies to cubature rules only")
        if args.target_degree is not None:
            raise UsageError("1D reduction is controlled by --target-size")
        target = 1 if args.target_size is None else args.target_size
        if target < 1 or target > len(rule):
            raise UsageError(f"--target-size must be in 1..{len(rule)}")
        sym = None if args.mode == "symmetric" else False
        rules = [rule]
        while len(rules[-1]) > target:
            nxt = reduction_step(rules[-1], crit, sym)
            _report_step(rules[-1], nxt)
            rules.append(nxt)
        members = rules
        payload = NestedFamily(tuple(rules))
    else:
        if args.target_size is not None:
            raise UsageError("cubature reduction is controlled by --target-degree")
        target = rule.degree if args.target_degree is None else args.target_degree
        if target > rule.degree:
            raise UsageError(f"--target-degree {target} exceeds the rule's degree {rule.degree}")
        mode = {"positive": "positive", "symmetric": "symmetric", "negative": "negative"}[args.mode]
        members = cb.reduced_family(rule, mode, rule.degree, target, crit)
        prev = rule
        for m in members:
            _report_step(prev, m)
            prev = m
        payload = members[-1]
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for m in members:
            tag = f"n{len(m)}" if isinstance(m, QuadratureRule) else f"K{m.degree}_n{len(m)}"
            RuleFile(m, meta).save(d / f"rule_{tag}.json")
    _write_payload(payload, meta, args.out, args.format)
    return EXIT_OK


def cmd_smolyak(args, meta) -> int:
    d = args.d
    if d < 1:
        raise UsageError("--d must be >= 1")
    if (args.K is None) == (args.level is None):
        raise UsageError("give exactly one of --K or --level")
    K = args.K if args.K is not None else args.level + d - 1
    if args.family:
        fams = [_load(p) for p in args.family]
        if any(not isinstance(f, NestedFamily) for f in fams):
            raise UsageError("--family files must hold nested families")
        if len(fams) not in (1, d):
            raise UsageError("give one family or one per axis")
        sources = fams if len(fams) == d else fams[0]
    else:
        sources = level_source(args.kind, _dist(args.cc or "uniform:-1,1"))
    try:
        rule = smolyak_rule(sources, K, d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    log.info("Smolyak K=%d d=%d: %d nodes (%d zero-weight merges dropped)", K, d, len(rule),
             rule.meta["dropped"])
    _write_payload(rule, dict(meta, K=K, d=d), args.out, args.format)
    return EXIT_OK


def cmd_counts(args, meta) -> int:
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    bad = set(modes) - {"smolyak", "positive", "negative"}
    if bad:
        raise UsageError(f"unknown modes {sorted(bad)}")
    rows = [count_row(d, K, modes, odd_start=args.odd_start) for d in args.d for K in args.K]
    _emit(table_csv(rows, meta), args.out)
    return EXIT_OK


def cmd_condition(args, meta) -> int:
    rows = []
    for path in args.files:
        r = _load(path)
        members = list(r) if isinstance(r, NestedFamily) else [r]
        for m in members:
            rows.append({"file": path, "nodes": len(m), "degree": m.degree,
                         "kappa": cb.condition_number(m)})
    if args.smolyak_cc:
        for row in condition_series(args.smolyak_cc, args.degrees):
            rows.append({"file": f"smolyak_cc_d{row['d']}", "nodes": row["nodes"], "degree": row["K"],
                         "kappa": row["kappa"]})
    if not rows:
        raise UsageError("no rules given")
    _emit(table_csv(rows, meta), args.out)
    return EXIT_OK


def _study(job):
    method, d, degrees, family, runs, seed = job
    return convergence_study(ladder([method], d, degrees), family, d, runs, seed)


def cmd_benchmark(args, meta) -> int:
    methods = [m.strip() for m in args.rules.split(",") if m.strip()]
    bad = set(methods) - set(METHODS)
    if bad:
        raise UsageError(f"unknown rules {sorted(bad)}; choose from {', '.join(METHODS)}")
    if not 1 <= args.family <= 6:
        raise UsageError("--family must be 1..6")
    jobs = [(m, args.dim, tuple(args.degrees), args.family, args.runs, args.seed) for m in methods]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_study, jobs))
    else:
        results = [_study(j) for j in jobs]
    rows = []
    for m, res in zip(methods, results):
        for r in res:
            rows.append({"rule_name": r["rule"], "method": m, "N_nodes": r["nodes"],
                         "degree": r["degree"], "mean_error": r["mean_error"]})
    _emit(table_csv(rows, meta), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nestquad", description="Nested quadrature and cubature by Caratheodory reduction.")
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out_opts(sp):
        sp.add_argument("--out", help="output file (.json or .csv); stdout if omitted")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    q = sub.add_parser("quad", help="Gauss or Clenshaw-Curtis rule (tensor product with --dim)")
    q.add_argument("--dist", default="uniform:-1,1")
    q.add_argument("--kind", choices=("gauss", "cc", "clenshaw_curtis"), default="gauss")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--dim", type=int, default=1)
    out_opts(q)
    q.set_defaults(func=cmd_quad)

    r = sub.add_parser("reduce", help="Caratheodory reduction of a rule file")
    r.add_argument("input")
    r.add_argument("--mode", choices=("positive", "symmetric", "negative"), default="symmetric")
    r.add_argument("--criterion", choices=("prior", "weight"), default="prior")
    r.add_argument("--target-size", type=int)
    r.add_argument("--target-degree", type=int)
    r.add_argument("--out-dir", help="also write every intermediate rule here")
    out_opts(r)
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("smolyak", help="Smolyak sparse grid")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--K", type=int)
    s.add_argument("--level", type=int, help="highest 1D level per axis (K = level + d - 1)")
    s.add_argument("--family", action="append", help="nested family file (repeat per axis)")
    s.add_argument("--cc", metavar="DIST", help="use generated rules for this distribution")
    s.add_argument("--kind", choices=("cc", "gauss"), default="cc")
    out_opts(s)
    s.set_defaults(func=cmd_smolyak)

    c = sub.add_parser("counts", help="node-count table by dimension and degree")
    c.add_argument("--d", type=int, nargs="+", default=[5])
    c.add_argument("--K", type=int, nargs="+", default=[5, 7, 9])
    c.add_argument("--modes", default="smolyak,positive,negative")
    c.add_argument("--odd-start", action="store_true", help="round tensor starts up to odd length")
    c.add_argument("--out")
    c.set_defaults(func=cmd_counts)

    k = sub.add_parser("condition", help="condition numbers of rule files")
    k.add_argument("files", nargs="*")
    k.add_argument("--smolyak-cc", type=int, metavar="D", help="add the CC Smolyak series in D dims")
    k.add_argument("--degrees", type=int, nargs="+", default=[1, 3, 5, 7, 9, 11, 13, 15])
    k.add_argument("--out")
    k.set_defaults(func=cmd_condition)

    b = sub.add_parser("benchmark", help="Genz convergence study on the unit cube")
    b.add_argument("--family", type=int, required=True)
    b.add_argument("--dim", type=int, default=5)
    b.add_argument("--runs", type=int, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--rules", default=",".join(METHODS))
    b.add_argument("--degrees", type=int, nargs="+", default=[3, 5, 7, 9])
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out")
    b.set_defaults(func=cmd_benchmark)
    return p


def _apply_config(parser, argv):
    # --config supplies defaults; explicit flags still win
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        cfg = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            vals = {k.replace("-", "_"): v for k, v in cfg.items()}
            sp.set_defaults(**vals)
            for a in sp._actions:
                if a.dest in vals:
                    a.required = False


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"nestquad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args, _invocation(argv))
    except UsageError as exc:
        print(f"nestquad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ReductionError, KernelError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"nestquad: failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
