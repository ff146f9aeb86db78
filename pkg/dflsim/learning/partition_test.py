import unittest

import numpy as np
import pytest

from dflsim.errors import InsufficientShards
from dflsim.learning.partition import partition_noniid


class TestPartitionNonIID(unittest.TestCase):
    def setUp(self) -> None:
        # label-sorted like MNIST's 60000 training samples, but shuffled
        self.labels = np.random.default_rng(0).permutation(np.repeat(np.arange(10), 6000))

    def test_mnist_sized_split(self) -> None:
        datasets = partition_noniid(self.labels, 54, 300, np.random.default_rng(1))

        self.assertEqual(len(datasets), 54)
        for dataset in datasets:
            self.assertEqual(len(dataset), 600)
            self.assertLessEqual(len(dataset.label_histogram), 4)
            self.assertEqual(sum(dataset.label_histogram.values()), 600)

        used = np.concatenate([d.indices for d in datasets])
        # disjoint, 108 shards used and 92 discarded
        self.assertEqual(len(np.unique(used)), 108 * 300)
        self.assertEqual(60000 - len(used), 92 * 300)

    def test_histogram_matches_labels(self) -> None:
        datasets = partition_noniid(self.labels, 10, 300, np.random.default_rng(2))
        for dataset in datasets:
            values, counts = np.unique(self.labels[dataset.indices], return_counts=True)
            self.assertEqual(dataset.label_histogram, dict(zip(values.tolist(), counts.tolist(), strict=True)))

    def test_seeded(self) -> None:
        a = partition_noniid(self.labels, 20, 300, np.random.default_rng(3))
        b = partition_noniid(self.labels, 20, 300, np.random.default_rng(3))
        for x, y in zip(a, b, strict=True):
            np.testing.assert_array_equal(x.indices, y.indices)

    def test_too_many_devices(self) -> None:
        with pytest.raises(InsufficientShards):
            partition_noniid(self.labels, 101, 300, np.random.default_rng(0))

    def test_indivisible_sample_count(self) -> None:
        with pytest.raises(InsufficientShards):
            partition_noniid(self.labels[:-1], 10, 300, np.random.default_rng(0))

    def test_shards_per_device(self) -> None:
        datasets = partition_noniid(np.repeat(np.arange(4), 30), 2, 10, np.random.default_rng(0), shards_per_device=3)
        self.assertEqual([len(d) for d in datasets], [30, 30])
