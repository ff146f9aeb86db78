import json
import pathlib
import time
import typing as t

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import BaseModel

import dflsim
from dflsim.dataset.mnist import load_mnist
from dflsim.dataset.samples import LabeledData
from dflsim.learning.ddfl import ACCURACY, run_ddfl, run_fl_baseline
from dflsim.learning.partition import partition_noniid
from dflsim.models import Experiment, ExperimentConfig, Scheme
from dflsim.network.cost import device_cost
from dflsim.network.topology import generate_topology
from dflsim.optimization.optimizer import CostTrace, optimize
from dflsim.runtime.events import on_event
from dflsim.runtime.metrics import RoundMetrics, monte_carlo_mean, rounds_to_target, write_csv
from dflsim.runtime.thread_pool import ReplicaPool
from dflsim.seeding import Stream, generator

MANIFEST_FILE: str = "manifest.json"

COST: str = "cost"
FL: str = "fl"


class RunSeed(BaseModel):
    run_id: int
    seed: int


class Manifest(BaseModel):
    """
    Everything needed to re-run an experiment or any single replica of it.
    """

    version: str = dflsim.__version__
    experiment: Experiment
    started_at: float = 0.0
    finished_at: float = 0.0
    # fully resolved configuration
    config: dict[str, t.Any] = {}
    runs: list[RunSeed] = []
    # written files, relative to the output directory
    files: list[str] = []

    def save_to(self, path: pathlib.Path) -> None:
        self.finished_at = time.time()
        path.write_text(self.model_dump_json(indent=2))

    @classmethod
    def load_from(cls, path: pathlib.Path) -> "Manifest":
        data = json.loads(path.read_text())
        return cls.model_validate(data)

    def resolved_config(self) -> ExperimentConfig:
        return ExperimentConfig.model_validate(self.config)


def load_config(
    config_path: pathlib.Path,
    runs: int | None = None,
    seed: int | None = None,
    output_dir: pathlib.Path | None = None,
) -> ExperimentConfig:
    """
    Load a configuration file and apply command line overrides, validating the result.
    """
    config = ExperimentConfig.from_path(config_path)

    overrides: dict[str, t.Any] = {}
    if runs is not None:
        overrides["n_runs"] = runs
    if seed is not None:
        overrides["seed"] = seed
    if output_dir is not None:
        overrides["output_dir"] = output_dir

    if not overrides:
        return config

    return ExperimentConfig.model_validate(config.model_dump() | overrides)


def ddfl_label(subglobal_iters: int) -> str:
    return f"ddfl_s{subglobal_iters}"


def cost_surface(config: ExperimentConfig) -> dict[str, pd.DataFrame]:
    """
    Device cost over a grid of log-spaced SINR and linearly spaced relative accuracy.
    """
    surface = config.surface
    m = config.cost.waterfall_threshold or config.topology.waterfall_threshold

    sinr = np.geomspace(surface.sinr_min, surface.sinr_max, surface.points)
    theta = np.linspace(surface.theta_min, surface.theta_max, surface.points)
    grid_sinr, grid_theta = np.meshgrid(sinr, theta, indexing="ij")

    frame = pd.DataFrame(
        {
            "sinr": grid_sinr.ravel(),
            "theta": grid_theta.ravel(),
            "cost": device_cost(grid_theta, grid_sinr, m).ravel(),
        }
    )
    return {"cost_surface.csv": frame}


def convergence_replica(config: ExperimentConfig, run_id: int) -> dict[Scheme, CostTrace]:
    replica = config.for_replica(run_id)
    state = generate_topology(replica.topology)

    traces = {}
    for scheme in replica.schemes:
        _, trace = optimize(state, replica.optimizer.model_copy(update={"scheme": scheme}), replica.cost)
        traces[scheme] = trace
    return traces


def learning_replica(
    config: ExperimentConfig,
    run_id: int,
    samples: LabeledData,
    test: LabeledData,
) -> dict[str, RoundMetrics]:
    """
    One replica of the DDFL versus FL comparison: the groups are the association found by
    the proposed optimizer on this replica's topology, every scheme shares the partition
    and the initial model.
    """
    if config.dataset is None:
        raise ValueError("ddfl_vs_fl requires a dataset")

    replica = config.for_replica(run_id)
    seed = replica.train.seed
    state = generate_topology(replica.topology)
    assignment, _ = optimize(state, replica.optimizer.model_copy(update={"scheme": Scheme.PROPOSED}), replica.cost)

    datasets = partition_noniid(
        samples.labels,
        state.n_devices,
        config.dataset.shard_size,
        generator(seed, Stream.PARTITION),
        config.dataset.shards_per_device,
    )

    budget = replica.train.iteration_budget
    results = {}
    for subglobal_iters in replica.subglobal_sweep:
        cfg = replica.train.model_copy(
            update={"subglobal_iters": subglobal_iters, "local_iters": budget // subglobal_iters}
        )
        results[ddfl_label(subglobal_iters)] = run_ddfl(state, assignment, datasets, samples, test, cfg, run_id)

    fl_cfg = replica.train.model_copy(update={"local_iters": budget, "subglobal_iters": 1})
    results[FL] = run_fl_baseline(datasets, samples, test, fl_cfg, run_id)
    return results


def _run_replicas(
    config: ExperimentConfig,
    replica: t.Callable[[int], t.Any],
    summarize: t.Callable[[t.Any], dict[str, t.Any]],
    workers: int | None,
) -> list[t.Any]:
    def task(run_id: int) -> t.Any:
        on_event("replica_started", {"run_id": run_id, "seed": config.seed + run_id})
        started_at = time.time()
        result = replica(run_id)
        on_event(
            "replica_complete",
            {"run_id": run_id, "elapsed": time.time() - started_at, "summary": summarize(result)},
        )
        return result

    with ReplicaPool(task, workers) as pool:
        return [result for _, result in pool.map_ordered(range(config.n_runs))]


def optimizer_convergence(config: ExperimentConfig, workers: int | None = None) -> dict[str, pd.DataFrame]:
    results: list[dict[Scheme, CostTrace]] = _run_replicas(
        config,
        lambda run_id: convergence_replica(config, run_id),
        lambda traces: {s.value: f"{trace.final_cost:.4f}" for s, trace in traces.items()},
        workers,
    )

    frames: dict[str, pd.DataFrame] = {}
    summary = []
    for scheme in config.schemes:
        metrics = RoundMetrics()
        for run_id, traces in enumerate(results):
            trace = traces[scheme]
            for step, cost in enumerate(trace.costs):
                metrics.add(run_id, step, COST, cost)
            summary.append(
                {
                    "run_id": run_id,
                    "scheme": scheme.value,
                    "iterations_used": trace.iterations_used,
                    "converged": trace.converged,
                    "final_cost": trace.final_cost,
                }
            )

        frames[f"cost_{scheme.value}.csv"] = metrics.to_frame()
        frames[f"cost_{scheme.value}_mean.csv"] = monte_carlo_mean(metrics.traces(COST))

    frames["convergence.csv"] = pd.DataFrame(
        summary, columns=["run_id", "scheme", "iterations_used", "converged", "final_cost"]
    )
    return frames


def ddfl_vs_fl(config: ExperimentConfig, workers: int | None = None) -> dict[str, pd.DataFrame]:
    if config.dataset is None:
        raise ValueError("ddfl_vs_fl requires a dataset")

    samples, test = load_mnist(config.dataset)
    target = config.train.accuracy_target

    results: list[dict[str, RoundMetrics]] = _run_replicas(
        config,
        lambda run_id: learning_replica(config, run_id, samples, test),
        lambda per_scheme: {
            label: rounds_to_target(metrics.series(ACCURACY), target) or "-" for label, metrics in per_scheme.items()
        },
        workers,
    )

    labels = [ddfl_label(s) for s in config.subglobal_sweep] + [FL]
    frames: dict[str, pd.DataFrame] = {}
    reached = []
    for label in labels:
        merged = RoundMetrics()
        for run_id, per_scheme in enumerate(results):
            merged.extend(per_scheme[label])
            reached.append(
                {
                    "run_id": run_id,
                    "scheme": label,
                    "rounds": rounds_to_target(per_scheme[label].series(ACCURACY), target),
                }
            )

        frames[f"accuracy_{label}.csv"] = merged.to_frame()
        frames[f"accuracy_{label}_mean.csv"] = monte_carlo_mean(merged.traces(ACCURACY))

    rounds = pd.DataFrame(reached, columns=["run_id", "scheme", "rounds"])
    frames["rounds_to_target.csv"] = rounds.astype({"rounds": "Int64"})
    return frames


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> Manifest:
    """
    Run every replica of the configured experiment, then write its CSV files and the
    manifest to the output directory. Only the calling thread writes files.
    """
    manifest = Manifest(
        experiment=config.experiment,
        started_at=time.time(),
        config=config.model_dump(mode="json"),
    )

    on_event(
        "experiment_started",
        {
            "experiment": config.experiment.value,
            "n_runs": config.n_runs,
            "seed": config.seed,
            "workers": workers or "auto",
        },
    )

    if config.experiment == Experiment.COST_SURFACE:
        frames = cost_surface(config)
    else:
        manifest.runs = [RunSeed(run_id=k, seed=config.seed + k) for k in range(config.n_runs)]
        if config.experiment == Experiment.OPTIMIZER_CONVERGENCE:
            frames = optimizer_convergence(config, workers)
        else:
            frames = ddfl_vs_fl(config, workers)

    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    for name, frame in frames.items():
        write_csv(frame, output_dir / name)
        manifest.files.append(name)

    manifest.save_to(output_dir / MANIFEST_FILE)
    logger.debug(f"manifest saved to {output_dir / MANIFEST_FILE}")

    on_event("files_written", {"files": [str(output_dir / name) for name in [*manifest.files, MANIFEST_FILE]]})
    on_event(
        "experiment_complete",
        {
            "experiment": config.experiment.value,
            "elapsed": manifest.finished_at - manifest.started_at,
            "output_dir": str(output_dir),
        },
    )
    return manifest


__all__ = [
    "Manifest",
    "RunSeed",
    "load_config",
    "cost_surface",
    "convergence_replica",
    "learning_replica",
    "optimizer_convergence",
    "ddfl_vs_fl",
    "run_experiment",
]
