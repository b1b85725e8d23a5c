"""Command-line batch runner.

    irs-hwi run --experiment fig3a --config config/config.yaml --seed 42 --out fig3a.csv
    irs-hwi fig6b --set scenario.kappa_t=0.0049
    irs-hwi custom-sweep --axis P_dbm --grid 0:40:5 --n 64

Exit codes: 0 success, 2 argument error, 3 solver failure, 4 invariant
violation.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from .config import LOG_LEVEL_ENV, load_config
from .errors import ArgumentError, DivergenceError, DomainError, InvariantViolation, SolverFailure
from .experiments.dispatcher import build_spec, create_experiments, parse_grid
from .models.enums import ExperimentId, SweepAxis
from .workflows.graph import run_experiment

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_SOLVER = 3
EXIT_INVARIANT = 4


def _columns_epilog() -> str:
    lines = ["CSV columns (after a '# {json}' comment line with the resolved parameters):"]
    for experiment_id, experiment in create_experiments().items():
        if experiment_id is ExperimentId.CUSTOM_SWEEP:
            columns = ["<axis>", *experiment.value_columns]
        else:
            columns = list(experiment.columns)
        lines.append(f"  {experiment_id.value}: {', '.join(columns)}")
    return "\n".join(lines)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="YAML configuration file")
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--out", type=Path, default=None, help="output CSV path")
    common.add_argument("--trials", type=int, default=None, help="Monte Carlo trials per point")
    common.add_argument("--workers", type=int, default=None, help="worker processes")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override a configuration key (repeatable)",
    )
    common.add_argument("--grid", default=None, help="start:stop:step or comma list")
    common.add_argument(
        "--axis", choices=[axis.value for axis in SweepAxis], default=None, help="sweep axis"
    )
    common.add_argument("--n", type=int, default=None, help="element count for power sweeps")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="irs-hwi",
        description="IRS-aided link with hardware impairments: batch experiments to CSV",
        epilog=_columns_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    run = subparsers.add_parser(
        "run",
        parents=[common],
        help="run an experiment by id",
        epilog=_columns_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    run.add_argument(
        "--experiment", required=True, choices=[experiment.value for experiment in ExperimentId]
    )
    for experiment in ExperimentId:
        subparsers.add_parser(
            experiment.value,
            parents=[common],
            help=f"run {experiment.value}",
            epilog=_columns_epilog(),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    else:
        level = getattr(logging, os.getenv(LOG_LEVEL_ENV, "INFO").upper(), logging.INFO)
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True
    )


def _flag_overrides(args: argparse.Namespace) -> List[str]:
    flags = {"trials": args.trials, "seed": args.seed, "workers": args.workers}
    return [f"experiments.{key}={value}" for key, value in flags.items() if value is not None]


def execute(args: argparse.Namespace) -> int:
    experiment = ExperimentId(args.experiment if args.command == "run" else args.command)
    settings = load_config(args.config, [*args.overrides, *_flag_overrides(args)])
    grid = parse_grid(args.grid) if args.grid else None
    axis = SweepAxis(args.axis) if args.axis else None
    if axis is not None and experiment is not ExperimentId.CUSTOM_SWEEP:
        raise ArgumentError("--axis only applies to custom-sweep")
    spec = build_spec(experiment, settings, args.out, axis=axis, grid=grid, elements=args.n)
    state = run_experiment(spec, settings)
    print(state["output_path"])
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        return execute(args)
    except (ArgumentError, DivergenceError, DomainError) as exc:
        logger.error("%s", exc)
        return EXIT_ARGUMENT
    except SolverFailure as exc:
        logger.error("solver failure: %s", exc)
        return EXIT_SOLVER
    except InvariantViolation as exc:
        logger.error("invariant violation: %s %s", exc, exc.detail)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
