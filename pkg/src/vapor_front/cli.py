"""Command line: ``vapor-front {run,sweep,check} --scenario FILE ...``.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DomainError, NumericError, ScenarioError
from .runner import EXIT_INPUT, EXIT_NUMERIC, EXIT_PASS, EXIT_VERIFICATION, SWEEP_PARAMETERS
from .runner import check, run, sweep
from .scenario import load_scenario


def _parse_values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vapor-front",
        description="Condensable vapour injection into a slit-pore medium.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", required=True, help="scenario file (key = value text)")
        p.add_argument("--quiet", action="store_true", help="suppress the summary on stdout")

    p_run = sub.add_parser("run", help="evaluate fields, integrate fronts, write tables")
    common(p_run)
    p_run.add_argument("--out-dir", required=True, help="directory for CSV tables and report.json")

    p_sweep = sub.add_parser("sweep", help="one run per parameter value")
    common(p_sweep)
    p_sweep.add_argument("--out-dir", required=True)
    p_sweep.add_argument("--param", required=True, choices=sorted(SWEEP_PARAMETERS))
    p_sweep.add_argument("--values", required=True, type=_parse_values,
                         help="comma-separated values, e.g. 1e-4,1e-3")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    p_check = sub.add_parser("check", help="field invariant suite only")
    common(p_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
    except (OSError, ScenarioError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.command == "run":
        report = run(scenario, args.out_dir)
        if not args.quiet:
            print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return report.exit_code

    if args.command == "sweep":
        try:
            rows = sweep(scenario, args.param, args.values, args.out_dir, args.workers)
        except DomainError as exc:
            print(f"input error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        if not args.quiet:
            for row in rows:
                print(", ".join(f"{k}={v}" for k, v in row.items()))
        if any(row["status"] == "ERROR" for row in rows):
            return EXIT_NUMERIC
        if any(row["status"] != "PASS" for row in rows):
            return EXIT_VERIFICATION
        return EXIT_PASS

    try:
        results = check(scenario)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if not args.quiet:
        for name, ok in results.items():
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_PASS if all(results.values()) else EXIT_VERIFICATION
