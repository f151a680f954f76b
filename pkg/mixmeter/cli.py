from __future__ import annotations

import argparse
import logging
import sys
import tomllib
from pathlib import Path

from .config import DEFAULT_CONFIG_PATH, load_config
from .errors import ConvergenceError, ValidationError
from .models import Cat3Mode, EigenMethod
from .scenarios import ScenarioKind, ScenarioSpec, run_scenario

EXIT_OK = 0
EXIT_IO = 2
EXIT_VALIDATION = 3
EXIT_CONVERGENCE = 4

# CLI dest -> scenario parameter key
_PARAMETER_FLAGS = {
    "steps": "steps",
    "alpha": "alpha",
    "alpha_max": "alpha_max",
    "beta": "beta",
    "gamma": "gamma",
    "nbar_max": "nbar_max",
    "tmax": "tmax",
    "dt": "dt",
    "trunc": "truncation",
    "mode": "mode",
    "file": "path",
    "ref_dim": "ref_dim",
}


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, default=None, help="CSV path (default: <output_dir>/<kind>.csv).")
    parser.add_argument("--gnuplot", action="store_true", help="Also write <csv>.gp next to the CSV.")
    parser.add_argument(
        "--solver",
        choices=[method.value for method in EigenMethod],
        default=None,
        help="Eigensolver (default from config: jacobi).",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixmeter",
        description="Compute entropy, entropy fluctuations and the mixedness parameter as CSV sweeps.",
    )
    parser.add_argument(
        "--config",
        type=Path,
        default=DEFAULT_CONFIG_PATH,
        help="Path to mixmeter.toml (default: ./mixmeter.toml if present).",
    )
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default from config: WARNING).",
    )

    subparsers = parser.add_subparsers(dest="command", required=True)

    two_level = subparsers.add_parser(ScenarioKind.TWO_LEVEL.value, help="Two-level atom, phi in [0, pi/2].")
    two_level.add_argument("--steps", type=int, default=None, help="Grid intervals (default 400).")
    _add_output_options(two_level)

    cat2 = subparsers.add_parser(ScenarioKind.CAT2.value, help="Mixture of |a> and |-a> against |a|.")
    cat2.add_argument("--alpha", dest="alpha_max", type=float, default=None, help="Largest |a| (default 3).")
    cat2.add_argument("--steps", type=int, default=None, help="Grid intervals (default 60).")
    cat2.add_argument("--trunc", type=int, default=None, help="Fock truncation for the oracle column.")
    _add_output_options(cat2)

    cat3 = subparsers.add_parser(ScenarioKind.CAT3.value, help="Mixture of |a>, |-a> and |2a> against |a|.")
    cat3.add_argument("--alpha", dest="alpha_max", type=float, default=None, help="Largest |a| (default 3).")
    cat3.add_argument("--steps", type=int, default=None, help="Grid intervals (default 60).")
    cat3.add_argument(
        "--mode",
        choices=[mode.value for mode in Cat3Mode],
        default=None,
        help="Overlap used for the (2,3) Gram entry (default recomputed).",
    )
    _add_output_options(cat3)

    thermal = subparsers.add_parser(ScenarioKind.THERMAL.value, help="Thermal field against mean photon number.")
    thermal.add_argument("--nbar-max", type=float, default=None, help="Largest mean photon number (default 10).")
    thermal.add_argument("--steps", type=int, default=None, help="Grid intervals (default 100).")
    _add_output_options(thermal)

    jcm = subparsers.add_parser(ScenarioKind.JCM.value, help="Resonant atom-field evolution against lambda*t.")
    jcm.add_argument("--alpha", type=float, default=None, help="Initial coherent amplitude (default 4).")
    jcm.add_argument("--tmax", type=float, default=None, help="Last lambda*t (default 20).")
    jcm.add_argument("--dt", type=float, default=None, help="lambda*t step (default 0.01).")
    jcm.add_argument("--trunc", type=int, default=None, help="Fock truncation (default 64).")
    _add_output_options(jcm)

    damped = subparsers.add_parser(ScenarioKind.DAMPED.value, help="Decaying superposition against gamma*t.")
    damped.add_argument("--alpha", type=float, default=None, help="First amplitude (default 2).")
    damped.add_argument("--beta", type=float, default=None, help="Second amplitude (default 7).")
    damped.add_argument("--gamma", type=float, default=None, help="Decay rate (default 1).")
    damped.add_argument("--tmax", type=float, default=None, help="Last time (default 5).")
    damped.add_argument("--dt", type=float, default=None, help="Time step (default 0.005).")
    _add_output_options(damped)

    analyze = subparsers.add_parser(ScenarioKind.ANALYZE.value, help="Report on a stored density matrix.")
    analyze.add_argument("file", type=Path, help="Density matrix file ('dim N' then N rows of re/im pairs).")
    analyze.add_argument("--ref-dim", type=int, default=None, help="Reference dimension for normalised columns.")
    _add_output_options(analyze)

    ledger = subparsers.add_parser(ScenarioKind.LEDGER.value, help="Three five-level comparison states.")
    _add_output_options(ledger)
    return parser


def _spec_from_args(args: argparse.Namespace) -> ScenarioSpec:
    parameters = {
        key: getattr(args, dest)
        for dest, key in _PARAMETER_FLAGS.items()
        if getattr(args, dest, None) is not None
    }
    return ScenarioSpec(
        kind=ScenarioKind(args.command),
        parameters=parameters,
        output_path=args.out,
        gnuplot=args.gnuplot,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = load_config(config_path=args.config)
    except tomllib.TOMLDecodeError as exc:
        print(f"error: invalid config file {args.config}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    level_name = args.log_level or config.log_level
    if level_name not in logging.getLevelNamesMapping():
        level_name = "WARNING"
    logging.basicConfig(
        level=level_name,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.solver is not None:
        config.eigen_method = EigenMethod(args.solver)

    spec = _spec_from_args(args)
    try:
        result = run_scenario(spec, config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"Scenario: {result.kind.value}")
    print(f"Rows: {result.rows}")
    print(f"CSV: {result.csv_path}")
    if result.script_path is not None:
        print(f"Script: {result.script_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
