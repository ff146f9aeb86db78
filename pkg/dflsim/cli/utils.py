import pathlib
import typing as t

import typer
from loguru import logger
from pydantic import BaseModel

from dflsim.defaults import DEFAULT_WORKERS

# exit status of the CLI on configuration and dataset errors
EXIT_CONFIG_ERROR: int = 1
EXIT_DATA_ERROR: int = 2


class Arguments(BaseModel):
    config_path: pathlib.Path
    runs: int | None
    seed: int | None
    output_dir: pathlib.Path | None
    workers: int
    debug: bool
    quiet: bool
    log_path: pathlib.Path | None

    @property
    def log_level(self) -> str:
        return "DEBUG" if self.debug else "SUCCESS" if self.quiet else "INFO"


def _resolve_config_path(config_path: pathlib.Path) -> pathlib.Path:
    if not config_path.exists():
        # allow the suffix to be omitted
        for suffix in (".yml", ".yaml", ".toml", ".json"):
            candidate = config_path.with_suffix(suffix)
            if candidate.exists():
                return candidate

        logger.error(f"configuration file '{config_path}' does not exist")
        raise typer.Exit(EXIT_CONFIG_ERROR)

    return config_path


def _get_run_args(
    config_path: t.Annotated[
        pathlib.Path,
        typer.Option("--config", "-c", help="Experiment configuration (JSON, TOML or YAML)."),
    ],
    runs: t.Annotated[
        int | None,
        typer.Option("--runs", "-n", help="Override the number of Monte Carlo runs."),
    ] = None,
    seed: t.Annotated[
        int | None,
        typer.Option("--seed", "-s", help="Override the base seed."),
    ] = None,
    output_dir: t.Annotated[
        pathlib.Path | None,
        typer.Option("--out", "-o", help="Override the output directory."),
    ] = None,
    workers: t.Annotated[
        int,
        typer.Option("--workers", "-w", help="Number of replicas running in parallel."),
    ] = DEFAULT_WORKERS,
    debug: t.Annotated[
        bool,
        typer.Option("--debug", help="Enable debug logging"),
    ] = False,
    quiet: t.Annotated[
        bool,
        typer.Option("--quiet", "-q", help="Quiet mode"),
    ] = False,
    log_path: t.Annotated[
        pathlib.Path | None,
        typer.Option("--log", help="Log to a file."),
    ] = None,
) -> Arguments:
    return Arguments(
        config_path=_resolve_config_path(config_path),
        runs=runs,
        seed=seed,
        output_dir=output_dir,
        workers=workers,
        debug=debug,
        quiet=quiet,
        log_path=log_path,
    )
