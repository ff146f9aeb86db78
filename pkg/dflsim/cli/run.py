import pydantic
import typer
from loguru import logger
from typer_di import Depends, TyperDI

import dflsim
from dflsim.cli.utils import EXIT_CONFIG_ERROR, EXIT_DATA_ERROR, Arguments, _get_run_args
from dflsim.errors import DataError, SimulationError
from dflsim.runtime import logging
from dflsim.runtime.experiment import load_config, run_experiment

cli = TyperDI(
    no_args_is_help=True,
    pretty_exceptions_enable=False,
    context_settings={"help_option_names": ["-h", "--help"]},
)


@cli.command(
    context_settings={"help_option_names": ["-h", "--help"]},
    help="Run the Monte Carlo replicas of an experiment and write CSV files plus a manifest.",
)
def run(
    args: Arguments = Depends(_get_run_args),
) -> None:
    logging.init(args.log_path, level=args.log_level)
    logger.info(f"📡 dflsim v{dflsim.__version__}")

    try:
        config = load_config(args.config_path, runs=args.runs, seed=args.seed, output_dir=args.output_dir)
    except (pydantic.ValidationError, ValueError, OSError) as e:
        logger.error(f"invalid configuration {args.config_path}: {e}")
        raise typer.Exit(EXIT_CONFIG_ERROR) from e

    try:
        run_experiment(config, workers=args.workers)
    except (DataError, OSError) as e:
        logger.error(f"dataset error: {e}")
        raise typer.Exit(EXIT_DATA_ERROR) from e
    except SimulationError as e:
        logger.error(f"simulation failed: {e}")
        raise typer.Exit(EXIT_CONFIG_ERROR) from e
