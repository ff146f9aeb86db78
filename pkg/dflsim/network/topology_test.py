import math
import unittest

import numpy as np
import pytest

from dflsim.errors import InfeasibleAssignment, UnscheduledDevice
from dflsim.models import TopologyConfig
from dflsim.network.topology import (
    Assignment,
    NetworkState,
    channel_gain,
    generate_topology,
    packet_error_rate,
    path_loss_db,
    sbs_grid,
    sinr,
)


def hand_state(
    device_gains: list[list[float]],
    incumbent_gains: list[list[float]],
    device_power: float = 1.0,
    incumbent_power: float = 1.0,
    noise_power: float = 1.0,
) -> NetworkState:
    dg = np.array(device_gains, dtype=np.float64)
    ig = np.array(incumbent_gains, dtype=np.float64)
    n_devices, n_sbs = dg.shape
    n_rbs = ig.shape[0]
    return NetworkState(
        config=TopologyConfig(n_devices=n_devices, n_sbs=n_sbs, n_rbs=n_rbs),
        device_positions=np.zeros((n_devices, 2)),
        sbs_positions=np.zeros((n_sbs, 2)),
        incumbent_positions=np.zeros((n_rbs, 2)),
        device_thetas=np.zeros(n_devices),
        device_gains=dg,
        incumbent_gains=ig,
        device_power=device_power,
        incumbent_power=incumbent_power,
        noise_power=noise_power,
    )


class TestPathLoss(unittest.TestCase):
    def test_one_meter_at_2ghz(self) -> None:
        self.assertAlmostEqual(float(path_loss_db(1.0, 2e9)), 38.47, delta=0.01)

    def test_one_kilometer_at_2ghz(self) -> None:
        self.assertAlmostEqual(float(path_loss_db(1000.0, 2e9)), 98.47, delta=0.01)

    def test_tenfold_distance_adds_20db(self) -> None:
        for d in (1.0, 3.7, 250.0):
            delta = float(path_loss_db(10 * d, 2e9) - path_loss_db(d, 2e9))
            self.assertAlmostEqual(delta, 20.0, places=9)

    def test_strictly_increasing_in_distance_and_frequency(self) -> None:
        distances = np.linspace(1.0, 1500.0, 200)
        self.assertTrue(np.all(np.diff(path_loss_db(distances, 2e9)) > 0))

        freqs = np.linspace(1e8, 6e9, 50)
        losses = np.array([float(path_loss_db(100.0, f)) for f in freqs])
        self.assertTrue(np.all(np.diff(losses) > 0))

    def test_gain_is_clamped(self) -> None:
        gains = channel_gain(np.array([0.0, 0.5, 1.0, 10.0]), 2e9, 1.0)
        self.assertTrue(np.all(gains > 0))
        self.assertTrue(np.all(gains <= 1.0))
        self.assertEqual(gains[0], gains[2])
        self.assertEqual(gains[1], gains[2])
        self.assertLess(gains[3], gains[2])

    def test_gain_never_exceeds_one_at_low_frequency(self) -> None:
        # at 1 MHz the free-space loss is negative below ~24 m
        self.assertLessEqual(float(channel_gain(1.0, 1e6, 1.0)), 1.0)


class TestGenerateTopology(unittest.TestCase):
    def test_same_seed_is_reproducible(self) -> None:
        a = generate_topology(TopologyConfig(seed=11))
        b = generate_topology(TopologyConfig(seed=11))
        np.testing.assert_array_equal(a.device_positions, b.device_positions)
        np.testing.assert_array_equal(a.incumbent_positions, b.incumbent_positions)
        np.testing.assert_array_equal(a.device_thetas, b.device_thetas)
        np.testing.assert_array_equal(a.device_gains, b.device_gains)

    def test_distinct_seeds_give_distinct_layouts(self) -> None:
        a = generate_topology(TopologyConfig(seed=1))
        b = generate_topology(TopologyConfig(seed=2))
        self.assertFalse(np.array_equal(a.device_positions, b.device_positions))

    def test_default_counts(self) -> None:
        state = generate_topology(TopologyConfig())
        self.assertEqual(state.device_positions.shape, (54, 2))
        self.assertEqual(state.sbs_positions.shape, (6, 2))
        self.assertEqual(state.incumbent_positions.shape, (54, 2))
        self.assertEqual(state.device_gains.shape, (54, 6))
        self.assertEqual(state.incumbent_gains.shape, (54, 6))

    def test_everything_inside_the_area(self) -> None:
        state = generate_topology(TopologyConfig(area_side=1000.0, seed=5))
        for positions in (state.device_positions, state.sbs_positions, state.incumbent_positions):
            self.assertTrue(np.all(positions >= 0.0))
            self.assertTrue(np.all(positions <= 1000.0))

    def test_gains_thetas_and_noise_ranges(self) -> None:
        state = generate_topology(TopologyConfig(seed=3))
        self.assertTrue(np.all((state.device_gains > 0) & (state.device_gains <= 1)))
        self.assertTrue(np.all((state.incumbent_gains > 0) & (state.incumbent_gains <= 1)))
        self.assertTrue(np.all((state.device_thetas >= 0) & (state.device_thetas < 1)))
        self.assertGreater(state.noise_power, 0)

    def test_state_is_read_only(self) -> None:
        state = generate_topology(TopologyConfig())
        with pytest.raises(ValueError):
            state.device_gains[0, 0] = 1.0

    def test_sbs_grid_is_two_by_three(self) -> None:
        sites = sbs_grid(6, 1000.0)
        np.testing.assert_allclose(
            sites,
            [
                [1000 / 6, 250.0],
                [500.0, 250.0],
                [5000 / 6, 250.0],
                [1000 / 6, 750.0],
                [500.0, 750.0],
                [5000 / 6, 750.0],
            ],
        )


class TestSinr(unittest.TestCase):
    def test_no_interference_limit(self) -> None:
        state = generate_topology(TopologyConfig(seed=4, interference=False))
        assignment = Assignment(assoc={3: 2}, alloc={3: 7})
        expected = state.device_power * state.device_gains[3, 2] / state.noise_power
        self.assertEqual(sinr(3, state, assignment), expected)

    def test_hand_instance(self) -> None:
        state = hand_state([[1.0]], [[1.0]], device_power=2.0, incumbent_power=1.0, noise_power=1.0)
        self.assertEqual(sinr(0, state, Assignment(assoc={0: 0}, alloc={0: 0})), 1.0)

        state = hand_state([[0.5]], [[0.25]], device_power=2.0, incumbent_power=2.0, noise_power=0.5)
        # 2 * 0.5 / (2 * 0.25 + 0.5)
        self.assertAlmostEqual(sinr(0, state, Assignment(assoc={0: 0}, alloc={0: 0})), 1.0)

    def test_moving_closer_increases_sinr(self) -> None:
        state = generate_topology(TopologyConfig(seed=9))
        assignment = Assignment(assoc={0: 0}, alloc={0: 0})
        site = state.sbs_positions[0]

        far = state.device_positions.copy()
        far[0] = site + np.array([300.0, 0.0])
        near = state.device_positions.copy()
        near[0] = site + np.array([100.0, 0.0])

        self.assertGreater(
            sinr(0, state.with_device_positions(near), assignment),
            sinr(0, state.with_device_positions(far), assignment),
        )

    def test_unscheduled_device(self) -> None:
        state = generate_topology(TopologyConfig())
        with pytest.raises(UnscheduledDevice) as exc:
            sinr(1, state, Assignment(assoc={1: 0}))
        self.assertEqual(exc.value.device, 1)

        with pytest.raises(UnscheduledDevice):
            sinr(1, state, Assignment(alloc={1: 0}))

    def test_finite_for_every_link(self) -> None:
        state = generate_topology(TopologyConfig(seed=8))
        devices = np.arange(state.n_devices)[:, None, None]
        sbs = np.arange(state.n_sbs)[None, :, None]
        rbs = np.arange(state.n_rbs)[None, None, :]
        values = state.link_sinr(devices, sbs, rbs)
        self.assertTrue(np.all(np.isfinite(values)))
        self.assertTrue(np.all(values > 0))


class TestPacketErrorRate(unittest.TestCase):
    def test_closed_form(self) -> None:
        self.assertAlmostEqual(float(packet_error_rate(1.0, 1.0)), 1 - math.exp(-1), delta=1e-6)
        self.assertAlmostEqual(float(packet_error_rate(1.0, 1.0)), 0.63212, delta=1e-5)

    def test_half_at_inverted_threshold(self) -> None:
        for m in (0.5, 1.0, 3.0):
            self.assertAlmostEqual(float(packet_error_rate(m / math.log(2), m)), 0.5, places=12)

    def test_vanishes_for_large_sinr(self) -> None:
        self.assertLess(float(packet_error_rate(1e9, 1.0)), 1e-8)

    def test_monotonicity(self) -> None:
        rng = np.random.default_rng(0)
        sinrs = np.sort(rng.uniform(0.01, 100.0, size=100))
        ms = np.sort(rng.uniform(0.1, 5.0, size=100))

        self.assertTrue(np.all(np.diff(packet_error_rate(sinrs, 1.0)) < 0))
        self.assertTrue(np.all(np.diff(np.array([float(packet_error_rate(2.0, m)) for m in ms])) > 0))

    def test_within_unit_interval(self) -> None:
        rates = packet_error_rate(np.geomspace(0.1, 100.0, 50), 1.0)
        self.assertTrue(np.all((rates > 0) & (rates < 1)))


class TestAssignment(unittest.TestCase):
    def test_rb_shared_by_two_devices(self) -> None:
        with pytest.raises(InfeasibleAssignment):
            Assignment(assoc={0: 0, 1: 0}, alloc={0: 1, 1: 1}).check(2, 1, 2)

    def test_unknown_ids(self) -> None:
        with pytest.raises(InfeasibleAssignment):
            Assignment(assoc={0: 3}).check(1, 2, 1)
        with pytest.raises(InfeasibleAssignment):
            Assignment(alloc={5: 0}).check(2, 1, 1)

    def test_quota(self) -> None:
        assignment = Assignment(assoc={0: 0, 1: 0, 2: 0})
        assignment.check(3, 1, 3, quota=3)
        with pytest.raises(InfeasibleAssignment):
            assignment.check(3, 1, 3, quota=2)

    def test_sbs_load(self) -> None:
        self.assertEqual(Assignment(assoc={0: 1, 1: 1, 2: 0}).sbs_load(3), [1, 2, 0])
