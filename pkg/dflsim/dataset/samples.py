import dataclasses

import numpy as np
import numpy.typing as npt


@dataclasses.dataclass(frozen=True)
class LabeledData:
    """
    In-memory classification data: one flattened feature row per sample.
    """

    # (n_samples, n_features), scaled to [0, 1]
    features: npt.NDArray[np.float32]
    # (n_samples,)
    labels: npt.NDArray[np.int64]

    def __post_init__(self) -> None:
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError(f"{self.features.shape[0]} feature rows for {self.labels.shape[0]} labels")

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    def subset(self, indices: npt.ArrayLike) -> "LabeledData":
        index = np.asarray(indices, dtype=np.int64)
        return LabeledData(features=self.features[index], labels=self.labels[index])
