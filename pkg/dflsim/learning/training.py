import numpy as np
from loguru import logger

from dflsim.dataset.samples import LabeledData
from dflsim.errors import DimensionMismatch, EmptyDataset
from dflsim.learning.classifiers import Classifier
from dflsim.learning.params import ModelParams
from dflsim.seeding import Stream, generator


def initial_model(classifier: Classifier, seed: int) -> ModelParams:
    """
    Seeded initial weights, shared by every scheme compared within a replica.
    """
    return ModelParams(weights=classifier.init(generator(seed, Stream.MODEL_INIT)), n_samples=0)


def local_train(
    model: ModelParams,
    data: LabeledData,
    classifier: Classifier,
    epochs: int,
    learning_rate: float,
    batch_size: int,
    rng: np.random.Generator,
) -> ModelParams:
    """
    Run epochs full passes of mini-batch SGD over data, reshuffled at every epoch.
    """
    if len(data) == 0:
        raise EmptyDataset("cannot train on a device without samples")
    if epochs < 1:
        raise ValueError(f"epochs must be at least 1, got {epochs}")

    classifier.check(model.weights, data.features)

    weights = model.weights.copy()
    for _ in range(epochs):
        order = rng.permutation(len(data))
        for start in range(0, len(data), batch_size):
            batch = order[start : start + batch_size]
            _, grad = classifier.loss_and_grad(weights, data.features[batch], data.labels[batch])
            weights -= learning_rate * grad

    return ModelParams(weights=weights, n_samples=len(data))


def evaluate(model: ModelParams, test: LabeledData, classifier: Classifier) -> float:
    """
    Top-1 accuracy of the model on a held-out set.
    """
    if model.weights.shape != (classifier.n_params,):
        raise DimensionMismatch(f"model has {model.weights.shape[0]} parameters, expected {classifier.n_params}")
    if test.n_features != classifier.n_features:
        raise DimensionMismatch(f"test set has {test.n_features} features, model expects {classifier.n_features}")
    if len(test) == 0:
        raise EmptyDataset("cannot evaluate on an empty test set")

    accuracy = float(np.mean(classifier.predict(model.weights, test.features) == test.labels))
    logger.debug(f"evaluated on {len(test)} samples: accuracy {accuracy:.4f}")
    return accuracy


__all__ = ["initial_model", "local_train", "evaluate"]
