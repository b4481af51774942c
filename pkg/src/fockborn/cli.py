"""Command-line driver.

Commands: ``verify``, ``simulate``, ``equivalence``, ``all``. Each loads a
scenario file, runs the corresponding checks, writes the JSON report to
stdout (or ``--output``), and prints a human-readable table to stderr.
Exit code is 0 iff every record passed.

Seed resolution order: ``--seed`` flag, scenario file ``seed`` field, the
``FOCKBORN_SEED`` environment variable, then a fixed default of 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from ._version import __version__
from .errors import FockBornError
from .report import Report, resolve_seed, run_all, run_equivalence, run_simulate, run_verify
from .scenario import load_scenario

ENV_SEED = "FOCKBORN_SEED"


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockborn",
        description="Verify the representation-theoretic derivation of outcome "
        "probabilities and simulate the frequency interpretation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run the derivation-chain checks"),
        ("simulate", "Monte Carlo frequency run against derived probabilities"),
        ("equivalence", "commutation verdict and intertwiner checks"),
        ("all", "verify + equivalence + simulate"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="scenario JSON file")
        cmd.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        cmd.add_argument("--output", default=None, help="write the JSON report here instead of stdout")
        cmd.add_argument(
            "--tolerance-scale",
            type=float,
            default=1.0,
            help="multiply all thresholds by this factor (diagnostics)",
        )
    return parser


def _trace_path(output: str | None) -> Path:
    if output is None:
        return Path("fockborn_traces.csv")
    base = Path(output)
    return base.with_name(base.stem + ".traces.csv")


def _emit(report: Report, output: str | None, csv_text: str | None) -> None:
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)
    if csv_text is not None:
        _trace_path(output).write_text(csv_text)

    stamp = time.strftime("%Y-%m-%d %H:%M:%S")
    print(f"fockborn {report.command} ({stamp}, seed={report.seed})", file=sys.stderr)
    width = max((len(r.check_name) for r in report.records), default=10)
    for r in report.records:
        measured = "-" if r.measured_value is None else f"{r.measured_value:.3e}"
        threshold = "-" if r.threshold is None else f"{r.threshold:.3e}"
        status = "pass" if r.passed else "FAIL"
        print(
            f"  {r.check_name:<{width}}  {measured:>10}  (threshold {threshold:>10})  {status}",
            file=sys.stderr,
        )
    print(
        f"  overall: {'pass' if report.overall_pass else 'FAIL'}",
        file=sys.stderr,
    )


def main(argv=None) -> int:
    args = _parser().parse_args(argv)

    try:
        scenario = load_scenario(args.config)
    except FockBornError as exc:
        print(f"fockborn: {exc}", file=sys.stderr)
        return 2

    env_seed = os.environ.get(ENV_SEED) or None
    if env_seed is not None:
        try:
            env_seed = int(env_seed)
        except ValueError:
            print(f"fockborn: {ENV_SEED} must be an integer, got {env_seed!r}", file=sys.stderr)
            return 2
    seed = resolve_seed(scenario, args.seed, env_seed)
    scale = args.tolerance_scale

    csv_text = None
    if args.command == "verify":
        report = run_verify(scenario, seed, scale)
    elif args.command == "equivalence":
        report = run_equivalence(scenario, seed, scale)
    elif args.command == "simulate":
        report, csv_text = run_simulate(scenario, seed, scale)
    else:
        report, csv_text = run_all(scenario, seed, scale)
    report.scenario_path = str(args.config)

    _emit(report, args.output, csv_text)
    return 0 if report.overall_pass else 1


if __name__ == "__main__":
    raise SystemExit(main())
