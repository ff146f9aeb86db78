import pathlib
import typing as t

import pydantic
import typer
from loguru import logger
from typer_di import TyperDI

from dflsim.cli.utils import EXIT_CONFIG_ERROR, EXIT_DATA_ERROR, _resolve_config_path
from dflsim.models import Experiment
from dflsim.runtime import logging
from dflsim.runtime.experiment import load_config

cli = TyperDI(
    no_args_is_help=True,
    pretty_exceptions_enable=False,
    context_settings={"help_option_names": ["-h", "--help"]},
)


@cli.command(
    context_settings={"help_option_names": ["-h", "--help"]},
    help="Validate an experiment configuration without running it.",
)
def validate(
    config_path: t.Annotated[
        pathlib.Path,
        typer.Option("--config", "-c", help="Experiment configuration (JSON, TOML or YAML)."),
    ],
) -> None:
    logging.init(level="INFO")
    config_path = _resolve_config_path(config_path)

    try:
        config = load_config(config_path)
    except (pydantic.ValidationError, ValueError, OSError) as e:
        logger.error(f"invalid configuration {config_path}: {e}")
        raise typer.Exit(EXIT_CONFIG_ERROR) from e

    if config.experiment == Experiment.DDFL_VS_FL and config.dataset is not None:
        missing = config.dataset.missing()
        if missing:
            for path in missing:
                logger.error(f"dataset file '{path}' does not exist")
            raise typer.Exit(EXIT_DATA_ERROR)

    logger.success(f"✅ {config_path}: {config.experiment.value}, {config.n_runs} runs, seed {config.seed}")
