import dataclasses

import numpy as np
import numpy.typing as npt

from dflsim.errors import DimensionMismatch, EmptyAggregate

FloatArray = npt.NDArray[np.float64]


@dataclasses.dataclass(frozen=True)
class ModelParams:
    """
    Flat weight vector of a model plus the number of samples it was trained on, which is
    its weight in aggregation.
    """

    weights: FloatArray
    n_samples: int

    def __post_init__(self) -> None:
        if self.n_samples < 0:
            raise ValueError(f"n_samples must be non-negative, got {self.n_samples}")
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("model weights must be finite")

    def with_samples(self, n_samples: int) -> "ModelParams":
        return ModelParams(weights=self.weights, n_samples=n_samples)


def aggregate(models: list[ModelParams]) -> ModelParams:
    """
    Sample-count weighted mean of the weight vectors (FedAvg).

    Models are summed in list order, so the same list always gives bit-identical weights.
    A single model is returned as is.
    """
    if not models:
        raise EmptyAggregate("no models to aggregate")

    total = sum(model.n_samples for model in models)
    if total <= 0:
        raise EmptyAggregate("aggregated models hold no samples")

    size = models[0].weights.shape
    for model in models:
        if model.weights.shape != size:
            raise DimensionMismatch(f"cannot aggregate weights of shape {model.weights.shape} with {size}")

    if len(models) == 1:
        return models[0]

    acc = np.zeros(size, dtype=np.float64)
    for model in models:
        acc += model.weights * model.n_samples
    return ModelParams(weights=acc / total, n_samples=total)


__all__ = ["ModelParams", "aggregate"]
