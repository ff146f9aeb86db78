class SimulationError(Exception):
    """Base class for every error raised by the simulator."""


class UnscheduledDevice(SimulationError):
    def __init__(self, device: int, reason: str) -> None:
        super().__init__(f"device {device} is not scheduled: {reason}")
        self.device = device


class InfeasibleAssignment(SimulationError):
    pass


class EmptyInstance(SimulationError):
    pass


class CapacityExceeded(SimulationError):
    def __init__(self, n_devices: int, n_sbs: int, quota: int) -> None:
        super().__init__(f"{n_devices} devices do not fit {n_sbs} SBSs with quota {quota}")
        self.n_devices = n_devices
        self.n_sbs = n_sbs
        self.quota = quota


class EmptyDataset(SimulationError):
    pass


class EmptyAggregate(SimulationError):
    pass


class DimensionMismatch(SimulationError):
    pass


class InsufficientShards(SimulationError):
    pass


class DataError(SimulationError):
    """Raised while ingesting dataset files."""


class BadMagic(DataError):
    pass


class TruncatedFile(DataError):
    pass


class CountMismatch(DataError):
    pass
