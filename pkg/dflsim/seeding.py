from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """
    Independent random streams derived from one replica seed.
    """

    TOPOLOGY = 0
    OPTIMIZER = 1
    PARTITION = 2
    MODEL_INIT = 3
    SHUFFLE = 4
    CHANNEL = 5


def generator(seed: int, stream: Stream, *keys: int) -> np.random.Generator:
    """
    Counter-based generator for (seed, stream, *keys).

    The same key tuple always yields the same sequence, regardless of how many other
    generators were created before it, so parallel replicas and parallel devices are
    order-independent.
    """
    return np.random.default_rng(np.random.SeedSequence([seed, int(stream), *keys]))
