"""Command-line entry point: ``tempomotif <command> ...``.

Exit codes: 0 success, 2 usage error, 3 data error (bad edge list, bad
motif, unsupported motif for the chosen estimator, out-of-order stream).
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import ALGORITHMS, EstimateReport, ReportMismatchError, RunSpec, compare, format_comparison, generate_synthetic
from .exact import EnumerationLimitError
from .graph import EdgeListError, InvalidRangeError
from .motif import MotifError
from .offline import UnsupportedMotifError
from .stream import StreamOrderError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3

DATA_ERRORS = (EdgeListError, InvalidRangeError, MotifError, UnsupportedMotifError, StreamOrderError,
               EnumerationLimitError, ReportMismatchError, OSError, json.JSONDecodeError)


def _fraction(text):
    x = float(text)
    if not 0.0 < x <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1]")
    return x


def _nonneg(text):
    x = int(text)
    if x < 0:
        raise argparse.ArgumentTypeError(f"{text} is negative")
    return x


def _reservoir(text):
    s = text.strip().lower()
    if s.endswith("m"):
        if not 0.0 < float(s[:-1]) <= 1.0:
            raise argparse.ArgumentTypeError("fractional reservoir must be in (0, 1]")
        return s
    n = int(s)
    if n < 1:
        raise argparse.ArgumentTypeError("reservoir size must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tempomotif", description="Count and estimate temporal motifs.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name in ALGORITHMS:
        sp = sub.add_parser(name, help=f"run {name} on an edge list")
        sp.add_argument("--graph", required=True, help="edge list file (src dst time per line)")
        sp.add_argument("--motif", required=True, help="motif file, bundled name Q1..Q5, or inline text")
        sp.add_argument("--delta", required=True, type=_nonneg, help="time window")
        sp.add_argument("--p", type=_fraction, default=1.0, help="edge sampling probability")
        sp.add_argument("--q", type=_fraction, default=1.0, help="wedge sampling probability")
        sp.add_argument("--r", type=_reservoir, default=None,
                        help="reservoir size, or a fraction of the edge count such as 0.01m")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=10)
        sp.add_argument("--report-every", type=_nonneg, default=1000)
        sp.add_argument("--ground-truth", default=None, help="true count, or 'auto' to compute it")
        sp.add_argument("--ground-truth-cap", type=int, default=1_000_000,
                        help="largest edge count for which 'auto' computes the exact count")
        sp.add_argument("--skip-self-loops", action="store_true", help="drop self-loops instead of failing")
        sp.add_argument("--out", default=None, help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    gp = sub.add_parser("gen", help="write a synthetic edge list")
    gp.add_argument("--n", type=int, required=True, help="vertices")
    gp.add_argument("--m", type=int, required=True, help="edges")
    gp.add_argument("--span", type=_nonneg, required=True, help="largest timestamp")
    gp.add_argument("--model", choices=("uniform", "bursty", "skewed-pairs"), default="uniform")
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--out", default=None)

    cp = sub.add_parser("compare", help="compare two JSON reports")
    cp.add_argument("report_a")
    cp.add_argument("report_b")
    cp.add_argument("--format", choices=("table", "json"), default="table")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(args) -> int:
    if args.command == "gen":
        if args.n < 2 or args.m < 1:
            print("tempomotif: error: need --n >= 2 and --m >= 1", file=sys.stderr)
            return EXIT_USAGE
        _emit(generate_synthetic(args.n, args.m, args.span, args.model, args.seed), args.out)
        return EXIT_OK
    if args.command == "compare":
        reports = []
        for path in (args.report_a, args.report_b):
            with open(path, encoding="utf-8") as fh:
                reports.append(EstimateReport.from_json(fh.read()))
        rows = compare(*reports)
        text = json.dumps(rows, indent=2) if args.format == "json" else format_comparison(rows)
        print(text)
        return EXIT_OK
    if args.trials < 1:
        print("tempomotif: error: --trials must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if args.command in ("ses", "sews") and args.r is None:
        print(f"tempomotif: error: {args.command} requires --r", file=sys.stderr)
        return EXIT_USAGE
    truth = args.ground_truth
    if truth is not None and truth != "auto":
        try:
            truth = float(truth)
        except ValueError:
            print("tempomotif: error: --ground-truth must be a number or 'auto'", file=sys.stderr)
            return EXIT_USAGE
    spec = RunSpec(args.command, args.graph, args.motif, args.delta, p=args.p, q=args.q, r=args.r,
                   seed=args.seed, trials=args.trials, report_every=args.report_every, output=args.format,
                   ground_truth=truth, ground_truth_cap=args.ground_truth_cap,
                   self_loops="skip" if args.skip_self_loops else "reject")
    from .bench import run

    _emit(run(spec).render(args.format), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)  # exits with status 2 on usage errors
    try:
        return _run(args)
    except DATA_ERRORS as exc:
        print(f"tempomotif: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
