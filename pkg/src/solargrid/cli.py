"""Command line entry point: ``solargrid run | validate-config | lp-dump``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import load_config, standard_experiment
from .errors import ConfigError, WeatherError
from .optimizer import build_lp, dump_lp
from .pipeline import EXIT_CONFIG, EXIT_OK, EXIT_WEATHER, run_pipeline, simulate_all
from .scenario import build_matrices, household_warnings


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solargrid",
        description="Size solar panel area across a longitudinally distributed grid.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate, optimize and write outputs")
    run.add_argument("--config", required=True)
    run.add_argument("--experiment", type=int, choices=[1, 2, 3, 4],
                     help="run only this experiment (default: those in the config)")
    run.add_argument("--out", help="output directory (default: run.output_dir)")

    check = sub.add_parser("validate-config", help="check a scenario file and exit")
    check.add_argument("config")

    dump = sub.add_parser("lp-dump", help="print the LP for one experiment")
    dump.add_argument("--config", required=True)
    dump.add_argument("--experiment", type=int, choices=[1, 2, 3, 4], required=True)
    return parser


def _fail(code: int, message: str) -> int:
    print(f"solargrid: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "validate-config":
            cfg = load_config(args.config)
            print(f"{args.config}: ok ({len(cfg.locations)} locations, "
                  f"{len(cfg.experiments)} experiments)")
            for w in household_warnings(cfg.locations):
                print(f"warning: {w}")
            return EXIT_OK

        cfg = load_config(args.config)
        if args.command == "lp-dump":
            matrices = build_matrices(cfg.locations, simulate_all(cfg))
            problem = build_lp(matrices, standard_experiment(args.experiment).policy,
                               cfg.panel.unit_area)
            sys.stdout.write(dump_lp(problem))
            return EXIT_OK

        experiments = None
        if args.experiment is not None:
            experiments = (standard_experiment(args.experiment),)
        result = run_pipeline(cfg, experiments, args.out)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, f"config error: {exc}")
    except WeatherError as exc:
        return _fail(EXIT_WEATHER, f"weather error: {exc}")

    if result.exit_code != EXIT_OK:
        return _fail(result.exit_code, result.message)
    print(result.message)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
