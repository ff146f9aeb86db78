import unittest

import numpy as np
import numpy.typing as npt
import pytest

from dflsim.errors import DimensionMismatch
from dflsim.learning.classifiers import MLP, Classifier, LogisticRegression, make_classifier
from dflsim.models import ModelKind


def numeric_gradient(
    classifier: Classifier,
    weights: npt.NDArray[np.float64],
    features: npt.NDArray[np.float64],
    labels: npt.NDArray[np.int64],
    eps: float = 1e-6,
) -> npt.NDArray[np.float64]:
    grad = np.zeros_like(weights)
    for i in range(weights.shape[0]):
        plus, minus = weights.copy(), weights.copy()
        plus[i] += eps
        minus[i] -= eps
        grad[i] = (classifier.loss(plus, features, labels) - classifier.loss(minus, features, labels)) / (2 * eps)
    return grad


class TestGradients(unittest.TestCase):
    def check_random_inputs(self, classifier: Classifier, seed: int) -> None:
        rng = np.random.default_rng(seed)
        weights = rng.normal(0.0, 0.5, size=classifier.n_params)
        features = rng.uniform(0.0, 1.0, size=(4, classifier.n_features))
        labels = rng.integers(classifier.n_classes, size=4)

        _, analytic = classifier.loss_and_grad(weights, features, labels)
        numeric = numeric_gradient(classifier, weights, features, labels)

        error = np.linalg.norm(analytic - numeric) / (np.linalg.norm(analytic) + np.linalg.norm(numeric))
        self.assertLess(error, 1e-5)

    def test_logistic_regression(self) -> None:
        for seed in range(100):
            self.check_random_inputs(LogisticRegression(5, 3), seed)

    def test_mlp(self) -> None:
        for seed in range(100):
            self.check_random_inputs(MLP(5, 3, 4), seed)


class TestClassifiers(unittest.TestCase):
    def test_parameter_counts(self) -> None:
        self.assertEqual(make_classifier(ModelKind.LOGISTIC, 784, 10, 64).n_params, 7850)
        self.assertEqual(make_classifier(ModelKind.MLP, 784, 10, 64).n_params, 50890)

    def test_ties_go_to_the_lowest_class(self) -> None:
        classifier = LogisticRegression(4, 10)
        predictions = classifier.predict(np.zeros(classifier.n_params), np.ones((3, 4)))
        np.testing.assert_array_equal(predictions, [0, 0, 0])

    def test_init_is_seeded(self) -> None:
        for classifier in (LogisticRegression(6, 3), MLP(6, 3, 5)):
            a = classifier.init(np.random.default_rng(4))
            b = classifier.init(np.random.default_rng(4))
            np.testing.assert_array_equal(a, b)
            self.assertEqual(a.shape, (classifier.n_params,))

    def test_loss_of_uniform_prediction(self) -> None:
        classifier = LogisticRegression(3, 4)
        loss = classifier.loss(np.zeros(classifier.n_params), np.ones((2, 3)), np.array([1, 3]))
        self.assertAlmostEqual(loss, np.log(4), places=12)

    def test_dimension_checks(self) -> None:
        classifier = LogisticRegression(3, 2)
        with pytest.raises(DimensionMismatch):
            classifier.check(np.zeros(5))
        with pytest.raises(DimensionMismatch):
            classifier.check(np.zeros(classifier.n_params), np.zeros((2, 4)))
        classifier.check(np.zeros(classifier.n_params), np.zeros((2, 3)))
