import math
import pathlib

import pytest

from dflsim.runtime.metrics import COLUMNS, RoundMetrics, monte_carlo_mean, rounds_to_target, write_csv


def test_mean_of_single_trace_is_the_trace() -> None:
    frame = monte_carlo_mean([[0.5, 0.25, 0.125]])

    assert frame["step"].tolist() == [0, 1, 2]
    assert frame["mean"].tolist() == [0.5, 0.25, 0.125]
    assert frame["count"].tolist() == [1, 1, 1]


def test_mean_of_constant_traces() -> None:
    frame = monte_carlo_mean([[1.0] * 4, [3.0] * 4])
    assert frame["mean"].tolist() == [2.0] * 4


def test_ragged_traces_average_active_runs() -> None:
    frame = monte_carlo_mean([[1.0, 2.0, 3.0, 4.0], [3.0, 4.0]])

    assert frame["count"].tolist() == [2, 2, 1, 1]
    assert frame["mean"].tolist() == [2.0, 3.0, 3.0, 4.0]


def test_mean_requires_traces() -> None:
    with pytest.raises(ValueError):
        monte_carlo_mean([])


def test_series_per_run() -> None:
    metrics = RoundMetrics()
    for step, value in enumerate([0.1, 0.2]):
        metrics.add(0, step, "accuracy", value)
    metrics.add(1, 0, "accuracy", 0.3)
    metrics.add(0, 0, "cost", 0.9)

    assert metrics.series("accuracy", 0) == [0.1, 0.2]
    assert metrics.series("accuracy", 1) == [0.3]
    assert metrics.run_ids() == [0, 1]
    assert metrics.traces("accuracy") == [[0.1, 0.2], [0.3]]


def test_steps_must_be_contiguous() -> None:
    metrics = RoundMetrics()
    metrics.add(0, 0, "accuracy", 0.1)

    with pytest.raises(ValueError):
        metrics.add(0, 2, "accuracy", 0.2)
    with pytest.raises(ValueError):
        metrics.add(0, 0, "accuracy", 0.2)


@pytest.mark.parametrize("value", [math.nan, math.inf, -math.inf])
def test_non_finite_values_are_rejected(value: float) -> None:
    with pytest.raises(ValueError):
        RoundMetrics().add(0, 0, "accuracy", value)


def test_extend_keeps_contiguity() -> None:
    first, second = RoundMetrics(), RoundMetrics()
    first.add(0, 0, "accuracy", 0.1)
    second.add(1, 0, "accuracy", 0.2)

    first.extend(second)
    assert first.run_ids() == [0, 1]

    with pytest.raises(ValueError):
        first.extend(second)


def test_to_frame_columns() -> None:
    metrics = RoundMetrics()
    metrics.add(3, 0, "accuracy", 0.5)

    frame = metrics.to_frame()
    assert list(frame.columns) == COLUMNS
    assert frame.iloc[0].tolist() == [3, 0, "accuracy", 0.5]
    assert list(RoundMetrics().to_frame().columns) == COLUMNS


def test_rounds_to_target() -> None:
    assert rounds_to_target([0.2, 0.5, 0.85, 0.9], 0.85) == 3
    assert rounds_to_target([0.9], 0.85) == 1
    assert rounds_to_target([0.2, 0.5], 0.85) is None
    assert rounds_to_target([], 0.85) is None


def test_write_csv(tmp_path: pathlib.Path) -> None:
    path = write_csv(monte_carlo_mean([[1.0, 0.5]]), tmp_path / "nested" / "cost.csv")

    assert path.read_text() == "step,mean,count\n0,1.0,1\n1,0.5,1\n"
