import dataclasses

import numpy as np
import numpy.typing as npt
from loguru import logger

from dflsim.errors import InsufficientShards


@dataclasses.dataclass(frozen=True)
class DeviceDataset:
    """
    The samples one device holds, as indices into the shared training set.
    """

    indices: npt.NDArray[np.int64]
    # label -> count
    label_histogram: dict[int, int]

    def __len__(self) -> int:
        return int(self.indices.shape[0])


def partition_noniid(
    labels: npt.ArrayLike,
    n_devices: int,
    shard_size: int,
    rng: np.random.Generator,
    shards_per_device: int = 2,
) -> list[DeviceDataset]:
    """
    Pathological non-IID split: sort the samples by label, cut them into contiguous shards
    of shard_size and deal shards_per_device random shards to every device. Leftover
    shards are discarded.
    """
    labels = np.asarray(labels, dtype=np.int64)
    n_samples = labels.shape[0]
    if shard_size < 1 or n_samples % shard_size != 0:
        raise InsufficientShards(f"{n_samples} samples cannot be cut into shards of {shard_size}")

    n_shards = n_samples // shard_size
    needed = shards_per_device * n_devices
    if needed > n_shards:
        raise InsufficientShards(f"{n_devices} devices need {needed} shards, only {n_shards} available")

    # stable sort keeps equal labels in index order
    order = np.argsort(labels, kind="stable")
    shards = order.reshape(n_shards, shard_size)
    dealt = rng.permutation(n_shards)[:needed].reshape(n_devices, shards_per_device)

    logger.debug(f"non-IID partition: {n_shards} shards, {needed} used, {n_shards - needed} discarded")

    datasets = []
    for shard_ids in dealt:
        indices = np.sort(shards[shard_ids].ravel())
        values, counts = np.unique(labels[indices], return_counts=True)
        datasets.append(
            DeviceDataset(
                indices=indices,
                label_histogram={int(v): int(c) for v, c in zip(values, counts, strict=True)},
            )
        )
    return datasets


__all__ = ["DeviceDataset", "partition_noniid"]
