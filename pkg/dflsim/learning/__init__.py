from dflsim.learning.classifiers import MLP, Classifier, LogisticRegression, make_classifier
from dflsim.learning.ddfl import run_ddfl, run_fl_baseline
from dflsim.learning.params import ModelParams, aggregate
from dflsim.learning.partition import DeviceDataset, partition_noniid
from dflsim.learning.training import evaluate, initial_model, local_train

__all__ = [
    "Classifier",
    "LogisticRegression",
    "MLP",
    "make_classifier",
    "ModelParams",
    "aggregate",
    "DeviceDataset",
    "partition_noniid",
    "initial_model",
    "local_train",
    "evaluate",
    "run_ddfl",
    "run_fl_baseline",
]
