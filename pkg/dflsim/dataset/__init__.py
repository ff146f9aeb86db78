from dflsim.dataset.mnist import load_mnist, load_mnist_idx
from dflsim.dataset.samples import LabeledData

__all__ = ["LabeledData", "load_mnist", "load_mnist_idx"]
