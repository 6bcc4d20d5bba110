"""Command line entry point: ``efdvd run | sweep | check``.

Exit codes: 0 success, 2 configuration error, 3 solver failure,
4 property-check failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from typing import Dict, List, Optional

from .checks import run_checks
from .errors import DomainError
from .runner import (
    PRESETS,
    RunReport,
    build_config,
    load_config_file,
    run_single,
    run_sweep,
    scheme_names,
)

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_CHECK = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--preset", choices=sorted(PRESETS), help="named parameter set")
    p.add_argument("--scheme", help="dvd, ef-dvd, avf, ef-avf, a comma list, or 'all'")
    p.add_argument("--omega", help="fitting and breather frequency")
    p.add_argument("--beta", help="breather parameter")
    p.add_argument("--dx", help="spatial step (expressions in pi allowed)")
    p.add_argument("--dt", help="time step, or the largest step of a sweep")
    p.add_argument("--T", dest="T", help="final time")
    p.add_argument("--sweep-k", type=int, help="sweep dt/2^k for k = 0..K")
    p.add_argument("--tol", help="relative Newton residual tolerance")
    p.add_argument("--max-iters", help="Newton iteration cap")
    p.add_argument("--output", help="output directory (default: $EFDVD_OUTPUT_DIR)")
    p.add_argument("--jobs", type=int, default=1, help="parallel sweep rows")
    p.add_argument("--no-timing", action="store_true", help="leave wall_seconds empty for byte-stable CSV")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="efdvd", description="Energy-conserving NLS integrators on the breather benchmark.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="integrate once (or sweep with --sweep)")
    _add_run_flags(run)
    run.add_argument("--sweep", action="store_true", help="run the step-halving sweep")
    sweep = sub.add_parser("sweep", help="step-halving convergence sweep")
    _add_run_flags(sweep)
    check = sub.add_parser("check", help="randomized algebraic identity suite")
    check.add_argument("--seed", type=int, default=0)
    return parser


def _values(args) -> Dict[str, str]:
    values: Dict[str, str] = {}
    if args.preset:
        values.update(PRESETS[args.preset])
    if args.config:
        values.update(load_config_file(args.config))
    flags = {
        "omega": args.omega,
        "breather.beta": args.beta,
        "grid.dx": args.dx,
        "grid.dt": args.dt,
        "grid.T": args.T,
        "solver.tol_residual": args.tol,
        "solver.max_iters": args.max_iters,
        "sweep.k_max": None if args.sweep_k is None else str(args.sweep_k),
    }
    if args.omega is not None:
        values.pop("scheme.omega", None)
        values.pop("breather.omega", None)
    values.update({k: v for k, v in flags.items() if v is not None})
    return values


def _run(args, sweep: bool) -> int:
    try:
        values = _values(args)
        names = scheme_names(args.scheme or values.get("scheme.variant", "dvd"))
        configs = [build_config({**values, "scheme.variant": n}, sweep=sweep) for n in names]
    except (DomainError, OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = RunReport()
    for cfg in configs:
        part = run_sweep(cfg, jobs=args.jobs) if sweep else run_single(cfg)
        report.rows.extend(part.rows)
    print(report.table())
    out = args.output or os.environ.get("EFDVD_OUTPUT_DIR") or configs[0].output_path
    if out:
        for path in report.write(out, timing=not args.no_timing):
            print(f"wrote {path}")
    return EXIT_OK if report.ok else EXIT_SOLVER


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "verbose", False):
        logging.basicConfig(level=logging.DEBUG)
    if args.command == "check":
        results = run_checks(args.seed)
        for r in results:
            print(r.line())
        return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK
    if args.command == "sweep":
        return _run(args, sweep=True)
    return _run(args, sweep=args.sweep)


if __name__ == "__main__":
    sys.exit(main())
