import pathlib
import sys
import typing as t

from loguru import logger
from termcolor import colored

from dflsim.runtime.events import Event, add_event_listener

FORMAT = "<level>[{time:MM-DD-YY HH:mm:ss}] {level}</level> {message}"


def init(
    log_path: pathlib.Path | None = None,
    level: str = "INFO",
    target: t.TextIO = sys.stderr,
) -> None:
    """
    Initialize the logging system.

    Args:
        log_path: The path to the log file.
        level: The log level to use.
        target: The stream the colored terminal sink writes to.
    """

    logger.remove()
    logger.add(target, colorize=True, format=FORMAT, level=level)

    if log_path:
        logger.add(log_path, format=FORMAT, level=level)

    add_event_listener(log_event_to_terminal)


def log_event_to_terminal(event: Event) -> None:
    data = event.data or {}
    if event.name == "experiment_started":
        runs = colored(str(data["n_runs"]), attrs=["bold"])
        logger.info(f"🚀 {data['experiment']} | {runs} runs | seed {data['seed']} | {data['workers']} workers")

    elif event.name == "replica_started":
        logger.debug(f"🎲 run {data['run_id']} started (seed {data['seed']})")

    elif event.name == "optimizer_iteration":
        logger.debug(f" ↳ seed {data['seed']} {data['scheme']} iteration {data['iteration']}: cost {data['cost']:.6f}")

    elif event.name == "global_round":
        logger.debug(f" ↳ run {data['run_id']} {data['scheme']} round {data['round']}: accuracy {data['accuracy']:.4f}")

    elif event.name == "replica_complete":
        summary = " | ".join(f"{k} {colored(v, 'yellow')}" for k, v in data.get("summary", {}).items())
        logger.info(f"📊 run {data['run_id']} complete in {data['elapsed']:.2f}s {summary}".rstrip())

    elif event.name == "files_written":
        for path in data["files"]:
            logger.info(colored(f"💾 {path}", "dark_grey"))

    elif event.name == "experiment_complete":
        logger.info(
            colored(
                f"✅ {data['experiment']} complete in {data['elapsed']:.2f}s -> {data['output_dir']}",
                "green",
                attrs=["bold"],
            )
        )

    else:
        logger.info(f"unknown event: {event}")
