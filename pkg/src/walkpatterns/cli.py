"""Command-line interface: ``walkpatterns {classes,check,structure,simulate}``.

Exit codes: 0 success, 1 a negative answer (not equivalent, or a class failing
the homogeneity test), 2 bad input or an exceeded budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .diagram import bordered_cylindrical_blocks, flip_interval, valid_intervals
from .equivalence import enumerate_classes, flip_witness
from .errors import MAX_BLOCKS, MAX_EXHAUSTIVE_N, LengthMismatch, WalkPatternsError, check_size
from .perm import Permutation
from .structure import cohesive_intervals, irreducible_partition_fast
from .walk import KINDS, StepDistribution, class_report, dumps, estimate_frequencies, plot_rows

MAX_CHECK_N = 12

DIST_HELP = (
    "step law as kind:param,param. Kinds: "
    + "; ".join(f"{k}({','.join(names)})" for k, (names, _) in KINDS.items())
    + ". Exponential takes an optional shift loc (default 0)."
)


class UsageError(Exception):
    pass


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _perm(text: str) -> Permutation:
    return Permutation.parse(text)


def cmd_classes(args) -> int:
    n = args.n
    if n < 1:
        raise UsageError("--n must be at least 1")
    check_size(n, MAX_EXHAUSTIVE_N)
    classes = enumerate_classes(n, workers=args.workers)
    if args.format == "json":
        text = dumps(
            {
                "n": n,
                "count": len(classes),
                "classes": [
                    {"representative": str(c.representative), "members": [str(m) for m in c.members]}
                    for c in classes
                ],
            }
        )
    elif args.format == "csv":
        lines = ["representative,size,members"]
        lines += [f"{c.representative},{len(c)},{' '.join(str(m) for m in c.members)}" for c in classes]
        text = "\n".join(lines) + "\n"
    else:
        text = "".join(c.line() + "\n" for c in classes)
    _emit(text, args.out)
    return 0


def cmd_check(args) -> int:
    pi, tau = _perm(args.pi), _perm(args.tau)
    if len(pi) != len(tau):
        raise LengthMismatch(f"{pi} has length {len(pi)} but {tau} has length {len(tau)}")
    check_size(len(pi), MAX_CHECK_N)
    witness = flip_witness(pi, tau)
    if witness is None:
        print("NOT EQUIVALENT")
        return 1
    print("EQUIVALENT")
    if args.witness:
        if not witness.steps:
            print("(no flips needed)")
        for before, (i, j) in witness.steps:
            print(f"flip [{i},{j}]: {before} -> {flip_interval(before, (i, j))}")
    return 0


def cmd_structure(args) -> int:
    pi = _perm(args.pi)
    n = len(pi)
    print(f"pattern: {pi}")
    if n == 1:
        print("irreducible borders: 1")
        return 0
    print("valid intervals: " + " ".join(f"[{i},{j}]" for i, j in valid_intervals(pi)))
    blocks = bordered_cylindrical_blocks(pi)
    print(f"bordered cylindrical blocks ({len(blocks)}):")
    for b in blocks:
        print(f"  {b}")
    part = irreducible_partition_fast(pi)
    print(f"irreducible borders: {part}")
    if len(part) > MAX_BLOCKS:
        print(f"cohesive intervals: skipped, {len(part)} blocks exceed the budget of {MAX_BLOCKS}")
    else:
        print("cohesive intervals: " + " ".join(f"[{a},{b}]" for a, b in cohesive_intervals(pi)))
    return 0


SIMULATE_DEFAULTS = {
    "n": None,
    "dist": None,
    "trials": None,
    "seed": 0,
    "workers": 1,
    "out": None,
    "report": None,
    "format": "csv",
    "plot_data": None,
    "alpha": 1e-3,
}


def cmd_simulate(args) -> int:
    for key, default in SIMULATE_DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, default)
    for key in ("n", "dist", "trials"):
        if getattr(args, key) is None:
            raise UsageError(f"--{key} is required")
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    if not 0 < args.alpha < 1:
        raise UsageError("--alpha must lie in (0, 1)")
    check_size(args.n, MAX_EXHAUSTIVE_N)
    dist = StepDistribution.parse(args.dist)

    table = estimate_frequencies(dist, args.n, args.trials, args.seed, args.workers)
    classes = enumerate_classes(args.n)
    report = class_report(table, classes, args.alpha)

    if args.format == "json":
        freq_text = dumps(table.to_dict())
        report_text = dumps(report.to_dict())
    else:
        freq_text = table.to_csv(classes)
        report_text = report.to_csv()
    report_path = args.report
    if report_path is None and args.out:
        suffix = ".json" if args.format == "json" else ".csv"
        report_path = str(Path(args.out).with_suffix("")) + ".classes" + suffix
    if args.out:
        _emit(freq_text, args.out)
        _emit(report_text, report_path)
    else:
        _emit(freq_text, None)
        _emit("\n" + report_text, report_path)
    if args.plot_data:
        rows = ["pattern,frequency,class_representative"]
        rows += [f"{p},{f:.8f},{r}" for p, f, r in plot_rows(table, classes)]
        _emit("\n".join(rows) + "\n", args.plot_data)

    rejected = report.rejected_rows
    summary = f"tie rejections: {table.tie_rejections}; missing patterns: {len(report.missing_patterns)}; "
    if rejected:
        reps = " ".join(str(r.representative) for r in rejected)
        print(summary + f"{len(rejected)} of {len(report.rows)} classes fail homogeneity: {reps}", file=sys.stderr)
        return 1
    print(summary + f"all {len(report.rows)} classes pass homogeneity", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walkpatterns", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file with options for the chosen command")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classes", help="list the equivalence classes of S_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("tsv", "csv", "json"), default="tsv")
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("check", help="decide whether two patterns are equivalent")
    p.add_argument("pi", help="digits for n <= 9, otherwise comma separated")
    p.add_argument("tau")
    p.add_argument("--witness", action="store_true", help="print a shortest chain of valid flips")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("structure", help="valid intervals, blocks, irreducible and cohesive intervals")
    p.add_argument("pi")
    p.set_defaults(func=cmd_structure)

    p = sub.add_parser("simulate", help="estimate pattern frequencies of a random walk")
    p.add_argument("--n", type=int)
    p.add_argument("--dist", help=DIST_HELP)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="results do not depend on this")
    p.add_argument("--out", help="frequency table path (stdout if omitted)")
    p.add_argument("--report", help="class report path (default: next to --out)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--plot-data", dest="plot_data", help="write pattern,frequency,class triples here")
    p.add_argument("--alpha", type=float, help="homogeneity flag level (default 0.001)")
    p.set_defaults(func=cmd_simulate)
    return parser


def _apply_config(args: argparse.Namespace, argv: Sequence[str]) -> None:
    try:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    allowed = set(vars(args)) - {"func", "command", "config"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
    explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in doc.items():
        if key not in explicit:
            setattr(args, key, value)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(args, argv)
        return args.func(args)
    except (UsageError, WalkPatternsError, ValueError, TypeError, OSError) as exc:
        name = type(exc).__name__
        print(f"error ({name}): {exc}" if name != "UsageError" else f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
