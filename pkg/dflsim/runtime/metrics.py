import math
import pathlib
import typing as t

import pandas as pd
from pydantic import BaseModel

COLUMNS = ["run_id", "step", "metric", "value"]


class Record(BaseModel):
    run_id: int
    step: int
    metric: str
    value: float


class RoundMetrics(BaseModel):
    """
    Long-format metric table: one (run_id, step, metric, value) record per step.

    Steps of every (run_id, metric) series are contiguous from 0.
    """

    records: list[Record] = []

    def add(self, run_id: int, step: int, metric: str, value: float) -> None:
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value} for {metric} at step {step}")

        expected = len(self.series(metric, run_id))
        if step != expected:
            raise ValueError(f"step {step} of {metric} (run {run_id}) is not contiguous, expected {expected}")

        self.records.append(Record(run_id=run_id, step=step, metric=metric, value=value))

    def extend(self, other: "RoundMetrics") -> None:
        for record in other.records:
            self.add(record.run_id, record.step, record.metric, record.value)

    def series(self, metric: str, run_id: int | None = None) -> list[float]:
        return [
            r.value for r in self.records if r.metric == metric and (run_id is None or r.run_id == run_id)
        ]

    def run_ids(self) -> list[int]:
        return sorted({r.run_id for r in self.records})

    def traces(self, metric: str) -> list[list[float]]:
        return [self.series(metric, run_id) for run_id in self.run_ids()]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.records], columns=COLUMNS)


def monte_carlo_mean(traces: t.Sequence[t.Sequence[float]]) -> pd.DataFrame:
    """
    Step-wise mean over runs. Ragged traces are averaged over the runs still active at
    each step; the count column says how many.
    """
    if not traces:
        raise ValueError("at least one trace is required")

    long = pd.DataFrame(
        [(run, step, float(value)) for run, trace in enumerate(traces) for step, value in enumerate(trace)],
        columns=["run", "step", "value"],
    )
    means = long.groupby("step", sort=True)["value"].agg(mean="mean", count="size").reset_index()
    return means.astype({"step": "int64", "mean": "float64", "count": "int64"})


def rounds_to_target(accuracies: t.Sequence[float], target: float) -> int | None:
    """First 1-based round whose accuracy reaches target, None if it never does."""

    for index, accuracy in enumerate(accuracies):
        if accuracy >= target:
            return index + 1
    return None


def write_csv(frame: pd.DataFrame, path: pathlib.Path) -> pathlib.Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, sep=",", lineterminator="\n")
    return path


__all__ = ["Record", "RoundMetrics", "monte_carlo_mean", "rounds_to_target", "write_csv"]
