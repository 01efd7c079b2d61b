"""
Command-line interface.

Verbs: run, study {convergence,localization,segregation}, list-testcases,
verify-counterexample.  Exit codes: 0 success, 2 validation error,
3 solver failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import ConfigError, load_config, parse_config, preset_to_config
from .counterexample import CounterexampleError, certificate_lines, verify_negative_direction
from .model import DetailedBalanceViolation, HypothesisH3Violation
from .presets import REGISTRY, get_preset
from .scheme import SolverError
from .studies import DESK, run_convergence_study, run_localization_study, run_segregation, run_single

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossfv",
        description="Finite-volume solver for nonlocal cross-diffusion population systems",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="one simulation with CSV/figure output")
    p_run.add_argument("--preset", help="registry test case name")
    p_run.add_argument("--config", help="JSON configuration file")
    p_run.add_argument("--out", default="out", help="output directory")

    p_study = sub.add_parser("study", help="experiment drivers")
    p_study.add_argument(
        "kind", choices=["convergence", "localization", "segregation"]
    )
    p_study.add_argument("--preset", required=True)
    p_study.add_argument("--out", default="out")
    p_study.add_argument(
        "--scale",
        choices=["paper", "desk"],
        default=DESK,
        help="desk caps the ladder for bounded runtime",
    )

    sub.add_parser("list-testcases", help="print the registry")

    p_ce = sub.add_parser(
        "verify-counterexample", help="certify the indefinite kernel matrix witness"
    )
    p_ce.add_argument("--N", type=int, default=6, help="even cell count > 5")

    return parser


def _cmd_run(args) -> int:
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = parse_config(preset_to_config(args.preset))
    else:
        print("run: need --preset or --config", file=sys.stderr)
        return EXIT_VALIDATION
    result = run_single(cfg, out_dir=args.out)
    reports = result["step_reports"]
    total_iters = sum(r.newton_iterations for r in reports)
    print(
        f"completed {len(reports)} steps, {total_iters} Newton iterations, "
        f"{len(result['artifacts'])} artifacts in {args.out}"
    )
    return EXIT_OK


def _cmd_study(args) -> int:
    if args.kind == "convergence":
        result = run_convergence_study(args.preset, scale=args.scale, out_dir=args.out)
        for norm, order in result["orders"].items():
            print(f"{norm}-order: {order:.4f}")
        for norm, err in result["final_level_error"].items():
            print(f"{norm}-error: {err:.6e}")
    elif args.kind == "localization":
        result = run_localization_study(args.preset, scale=args.scale, out_dir=args.out)
        for norm, order in result["orders"].items():
            print(f"{norm}-order: {order:.4f}")
    else:
        result = run_segregation(args.preset, out_dir=args.out)
        for variant in ("local", "nonlocal"):
            for t, info in result[variant].items():
                gaps = ", ".join(f"{g:.4f}" for g in info["gaps"]) or "none"
                print(f"{variant} t={t}: gaps [{gaps}], overlap {info['overlap']:.3e}")
    print(f"artifacts in {args.out}")
    return EXIT_OK


def _cmd_list() -> int:
    for name in sorted(REGISTRY, key=lambda s: (len(s), s)):
        preset = get_preset(name)
        print(f"{name:8s} {preset.family:12s} {preset.description}")
    return EXIT_OK


def _cmd_counterexample(args) -> int:
    # unit single-species weight: the plain quadratic form certificate
    cert = verify_negative_direction(args.N, np.array([[1.0]]))
    for line in certificate_lines(cert):
        print(line)
    return EXIT_OK if cert.passed else EXIT_VALIDATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "run":
            return _cmd_run(args)
        if args.verb == "study":
            return _cmd_study(args)
        if args.verb == "list-testcases":
            return _cmd_list()
        if args.verb == "verify-counterexample":
            return _cmd_counterexample(args)
        return EXIT_VALIDATION
    except (ConfigError, DetailedBalanceViolation, HypothesisH3Violation,
            CounterexampleError, KeyError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
