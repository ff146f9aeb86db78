import dataclasses
import math
import typing as t

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict

from dflsim.errors import InfeasibleAssignment, UnscheduledDevice
from dflsim.models import TopologyConfig, dbm_to_watts
from dflsim.seeding import Stream, generator

FloatArray = npt.NDArray[np.float64]

SPEED_OF_LIGHT: float = 299_792_458.0
# 20 * log10(4 * pi / c)
FSPL_CONSTANT_DB: float = -147.552


class Assignment(BaseModel):
    """
    Device to SBS association and device to resource block allocation.

    Both maps are partial: a device missing from either one is unscheduled.
    """

    model_config = ConfigDict(frozen=True)

    assoc: dict[int, int] = {}
    alloc: dict[int, int] = {}

    def is_scheduled(self, device: int) -> bool:
        return device in self.assoc and device in self.alloc

    def sbs_load(self, n_sbs: int) -> list[int]:
        load = [0] * n_sbs
        for sbs in self.assoc.values():
            load[sbs] += 1
        return load

    def check(self, n_devices: int, n_sbs: int, n_rbs: int, quota: int | None = None) -> None:
        """
        Raise InfeasibleAssignment unless ids are in range, no resource block is shared and no
        SBS serves more than quota devices. At most one RB and one SBS per device is
        structural: the maps are keyed by device.
        """
        for device, sbs in self.assoc.items():
            if not 0 <= device < n_devices:
                raise InfeasibleAssignment(f"unknown device {device} in association")
            if not 0 <= sbs < n_sbs:
                raise InfeasibleAssignment(f"device {device} associated to unknown SBS {sbs}")

        for device, rb in self.alloc.items():
            if not 0 <= device < n_devices:
                raise InfeasibleAssignment(f"unknown device {device} in allocation")
            if not 0 <= rb < n_rbs:
                raise InfeasibleAssignment(f"device {device} allocated to unknown RB {rb}")

        used = list(self.alloc.values())
        if len(set(used)) != len(used):
            raise InfeasibleAssignment("a resource block is allocated to more than one device")
        if len(used) > n_rbs:
            raise InfeasibleAssignment(f"{len(used)} resource blocks allocated, only {n_rbs} available")

        if quota is not None:
            for sbs, load in enumerate(self.sbs_load(n_sbs)):
                if load > quota:
                    raise InfeasibleAssignment(f"SBS {sbs} serves {load} devices, quota is {quota}")


@dataclasses.dataclass(frozen=True)
class NetworkState:
    """
    Immutable snapshot of one random network realization with precomputed gain tables.
    """

    config: TopologyConfig
    # (n_devices, 2) meters
    device_positions: FloatArray
    # (n_sbs, 2) meters
    sbs_positions: FloatArray
    # one incumbent cellular user per resource block, (n_rbs, 2) meters
    incumbent_positions: FloatArray
    # relative local accuracy, lower is better
    device_thetas: FloatArray
    # linear gains, (n_devices, n_sbs)
    device_gains: FloatArray
    # linear gains, (n_rbs, n_sbs)
    incumbent_gains: FloatArray
    # watts
    device_power: float
    incumbent_power: float
    noise_power: float

    @property
    def n_devices(self) -> int:
        return int(self.device_positions.shape[0])

    @property
    def n_sbs(self) -> int:
        return int(self.sbs_positions.shape[0])

    @property
    def n_rbs(self) -> int:
        return int(self.incumbent_positions.shape[0])

    @property
    def waterfall_threshold(self) -> float:
        return self.config.waterfall_threshold

    def link_sinr(
        self,
        devices: npt.ArrayLike,
        sbs: npt.ArrayLike,
        rbs: npt.ArrayLike,
    ) -> FloatArray:
        """
        Vectorized SINR of devices uploading to sbs over rbs (broadcasting index arrays).
        """
        devices, sbs, rbs = np.asarray(devices), np.asarray(sbs), np.asarray(rbs)
        signal = self.device_power * self.device_gains[devices, sbs]
        interference = self.incumbent_power * self.incumbent_gains[rbs, sbs]
        return t.cast(FloatArray, signal / (interference + self.noise_power))

    def with_device_positions(self, positions: npt.ArrayLike) -> "NetworkState":
        """Copy of this state with devices moved and the device gain table recomputed."""
        positions = _frozen(np.asarray(positions, dtype=np.float64))
        return dataclasses.replace(
            self,
            device_positions=positions,
            device_gains=_frozen(_gain_table(positions, self.sbs_positions, self.config)),
        )


def path_loss_db(distance: npt.ArrayLike, freq: float) -> FloatArray:
    """
    Free-space path loss in dB: 20 log10(d) + 20 log10(f) - 147.552.
    """
    return t.cast(
        FloatArray,
        20.0 * np.log10(np.asarray(distance, dtype=np.float64)) + 20.0 * math.log10(freq) + FSPL_CONSTANT_DB,
    )


def channel_gain(distance: npt.ArrayLike, freq: float, min_distance: float) -> FloatArray:
    """
    Linear free-space gain with the distance clamped to min_distance and to the
    distance where the path loss reaches 0 dB, so the gain never exceeds 1.
    """
    floor = max(min_distance, SPEED_OF_LIGHT / (4.0 * math.pi * freq))
    clamped = np.maximum(np.asarray(distance, dtype=np.float64), floor)
    return t.cast(FloatArray, np.minimum(10.0 ** (-path_loss_db(clamped, freq) / 10.0), 1.0))


def sbs_grid(n_sbs: int, area_side: float) -> FloatArray:
    """
    Fixed SBS sites at the cell centers of a near-square grid, row-major (6 SBSs -> 2x3).
    """
    cols = math.ceil(math.sqrt(n_sbs))
    rows = math.ceil(n_sbs / cols)
    sites = [
        ((col + 0.5) * area_side / cols, (row + 0.5) * area_side / rows) for row in range(rows) for col in range(cols)
    ]
    return np.array(sites[:n_sbs], dtype=np.float64)


def _distances(a: FloatArray, b: FloatArray) -> FloatArray:
    return t.cast(FloatArray, np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1))


def _gain_table(sources: FloatArray, sbs_positions: FloatArray, config: TopologyConfig) -> FloatArray:
    return channel_gain(_distances(sources, sbs_positions), config.carrier_freq, config.min_distance)


def _frozen(array: FloatArray) -> FloatArray:
    array.setflags(write=False)
    return array


def generate_topology(config: TopologyConfig) -> NetworkState:
    """
    Draw one network realization: devices and incumbents uniform over the area, SBSs on
    the fixed grid, relative local accuracies uniform in [theta_low, theta_high).
    """
    rng = generator(config.seed, Stream.TOPOLOGY)

    device_positions = rng.uniform(0.0, config.area_side, size=(config.n_devices, 2))
    incumbent_positions = rng.uniform(0.0, config.area_side, size=(config.n_rbs, 2))
    thetas = rng.uniform(config.theta_low, config.theta_high, size=config.n_devices)
    sbs_positions = sbs_grid(config.n_sbs, config.area_side)

    return NetworkState(
        config=config,
        device_positions=_frozen(device_positions),
        sbs_positions=_frozen(sbs_positions),
        incumbent_positions=_frozen(incumbent_positions),
        device_thetas=_frozen(thetas),
        device_gains=_frozen(_gain_table(device_positions, sbs_positions, config)),
        incumbent_gains=_frozen(_gain_table(incumbent_positions, sbs_positions, config)),
        device_power=dbm_to_watts(config.device_tx_power),
        incumbent_power=dbm_to_watts(config.incumbent_tx_power) if config.interference else 0.0,
        noise_power=config.noise_power,
    )


def sinr(device: int, state: NetworkState, assignment: Assignment) -> float:
    """
    Uplink SINR of a scheduled device at its SBS, interfered by the incumbent of its RB.
    """
    if device not in assignment.assoc:
        raise UnscheduledDevice(device, "no SBS association")
    if device not in assignment.alloc:
        raise UnscheduledDevice(device, "no resource block")

    return float(state.link_sinr(device, assignment.assoc[device], assignment.alloc[device]))


def packet_error_rate(sinr: npt.ArrayLike, m: float) -> FloatArray:
    """
    Waterfall packet error rate 1 - exp(-m / sinr).
    """
    return t.cast(FloatArray, -np.expm1(-m / np.asarray(sinr, dtype=np.float64)))


__all__ = [
    "Assignment",
    "NetworkState",
    "path_loss_db",
    "channel_gain",
    "sbs_grid",
    "generate_topology",
    "sinr",
    "packet_error_rate",
]
