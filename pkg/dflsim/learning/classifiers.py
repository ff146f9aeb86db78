import abc
import typing as t

import numpy as np
import numpy.typing as npt

from dflsim.errors import DimensionMismatch
from dflsim.models import ModelKind

FloatArray = npt.NDArray[np.float64]


def _softmax_cross_entropy(logits: FloatArray, labels: npt.NDArray[np.int64]) -> tuple[float, FloatArray]:
    """
    Mean cross-entropy and its gradient with respect to the logits.
    """
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)
    rows = np.arange(labels.shape[0])
    loss = float(-np.mean(np.log(probs[rows, labels] + 1e-300)))
    grad = probs
    grad[rows, labels] -= 1.0
    return loss, grad / labels.shape[0]


class Classifier(abc.ABC):
    """
    A model architecture over a flat parameter vector.
    """

    def __init__(self, n_features: int, n_classes: int) -> None:
        self.n_features = n_features
        self.n_classes = n_classes

    @property
    @abc.abstractmethod
    def n_params(self) -> int: ...

    @abc.abstractmethod
    def init(self, rng: np.random.Generator) -> FloatArray: ...

    @abc.abstractmethod
    def logits(self, weights: FloatArray, features: npt.ArrayLike) -> FloatArray: ...

    @abc.abstractmethod
    def loss_and_grad(
        self, weights: FloatArray, features: npt.ArrayLike, labels: npt.NDArray[np.int64]
    ) -> tuple[float, FloatArray]: ...

    def loss(self, weights: FloatArray, features: npt.ArrayLike, labels: npt.NDArray[np.int64]) -> float:
        return self.loss_and_grad(weights, features, labels)[0]

    def predict(self, weights: FloatArray, features: npt.ArrayLike) -> npt.NDArray[np.int64]:
        # argmax breaks ties towards the lowest class index
        return t.cast(npt.NDArray[np.int64], np.argmax(self.logits(weights, features), axis=1))

    def check(self, weights: FloatArray, features: npt.ArrayLike | None = None) -> None:
        if weights.shape != (self.n_params,):
            raise DimensionMismatch(f"expected {self.n_params} parameters, got {weights.shape}")
        if features is not None and np.shape(features)[-1] != self.n_features:
            raise DimensionMismatch(f"expected {self.n_features} features, got {np.shape(features)[-1]}")


class LogisticRegression(Classifier):
    """Multinomial logistic regression: logits = x W + b."""

    @property
    def n_params(self) -> int:
        return self.n_features * self.n_classes + self.n_classes

    def _unpack(self, weights: FloatArray) -> tuple[FloatArray, FloatArray]:
        split = self.n_features * self.n_classes
        return weights[:split].reshape(self.n_features, self.n_classes), weights[split:]

    def init(self, rng: np.random.Generator) -> FloatArray:
        return t.cast(FloatArray, rng.normal(0.0, 0.01, size=self.n_params))

    def logits(self, weights: FloatArray, features: npt.ArrayLike) -> FloatArray:
        w, b = self._unpack(weights)
        return t.cast(FloatArray, np.asarray(features) @ w + b)

    def loss_and_grad(
        self, weights: FloatArray, features: npt.ArrayLike, labels: npt.NDArray[np.int64]
    ) -> tuple[float, FloatArray]:
        x = np.asarray(features, dtype=np.float64)
        loss, dlogits = _softmax_cross_entropy(self.logits(weights, x), labels)
        return loss, np.concatenate([(x.T @ dlogits).ravel(), dlogits.sum(axis=0)])


class MLP(Classifier):
    """One tanh hidden layer: logits = tanh(x W1 + b1) W2 + b2."""

    def __init__(self, n_features: int, n_classes: int, hidden: int) -> None:
        super().__init__(n_features, n_classes)
        self.hidden = hidden

    @property
    def n_params(self) -> int:
        return self.n_features * self.hidden + self.hidden + self.hidden * self.n_classes + self.n_classes

    def _unpack(self, weights: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
        d, h, c = self.n_features, self.hidden, self.n_classes
        sizes = np.cumsum([d * h, h, h * c])
        w1, b1, w2, b2 = np.split(weights, sizes)
        return w1.reshape(d, h), b1, w2.reshape(h, c), b2

    def init(self, rng: np.random.Generator) -> FloatArray:
        d, h, c = self.n_features, self.hidden, self.n_classes
        # Glorot uniform
        w1 = rng.uniform(-1.0, 1.0, size=d * h) * np.sqrt(6.0 / (d + h))
        w2 = rng.uniform(-1.0, 1.0, size=h * c) * np.sqrt(6.0 / (h + c))
        return np.concatenate([w1, np.zeros(h), w2, np.zeros(c)])

    def logits(self, weights: FloatArray, features: npt.ArrayLike) -> FloatArray:
        w1, b1, w2, b2 = self._unpack(weights)
        return t.cast(FloatArray, np.tanh(np.asarray(features) @ w1 + b1) @ w2 + b2)

    def loss_and_grad(
        self, weights: FloatArray, features: npt.ArrayLike, labels: npt.NDArray[np.int64]
    ) -> tuple[float, FloatArray]:
        x = np.asarray(features, dtype=np.float64)
        w1, b1, w2, b2 = self._unpack(weights)
        hidden = np.tanh(x @ w1 + b1)
        loss, dlogits = _softmax_cross_entropy(hidden @ w2 + b2, labels)
        dhidden = (dlogits @ w2.T) * (1.0 - hidden**2)
        grad = np.concatenate(
            [(x.T @ dhidden).ravel(), dhidden.sum(axis=0), (hidden.T @ dlogits).ravel(), dlogits.sum(axis=0)]
        )
        return loss, grad


def make_classifier(kind: ModelKind, n_features: int, n_classes: int, hidden: int) -> Classifier:
    if kind == ModelKind.LOGISTIC:
        return LogisticRegression(n_features, n_classes)
    return MLP(n_features, n_classes, hidden)


__all__ = ["Classifier", "LogisticRegression", "MLP", "make_classifier"]
