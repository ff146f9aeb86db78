import json
import math
import pathlib
import tomllib
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_yaml import parse_yaml_raw_as

from dflsim import defaults


class Experiment(str, Enum):
    COST_SURFACE = "cost_surface"
    OPTIMIZER_CONVERGENCE = "optimizer_convergence"
    DDFL_VS_FL = "ddfl_vs_fl"


class Scheme(str, Enum):
    """
    Association / resource allocation scheme.
    """

    # both maps optimized by the alternating matching games
    PROPOSED = "proposed"
    # matching association, random resource blocks
    BASELINE1 = "baseline1"
    # random association, matching resource blocks
    BASELINE2 = "baseline2"
    # both maps random
    RANDOM = "random"


class Aggregation(str, Enum):
    MEAN = "mean"
    SUM = "sum"


class UnscheduledPolicy(str, Enum):
    # a device without SBS or RB uploads nothing: PER = 1
    WORST_CASE = "worst_case"


class ModelKind(str, Enum):
    LOGISTIC = "logistic"
    MLP = "mlp"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TopologyConfig(_Strict):
    """
    Geometry and radio parameters of the simulated IoT network.
    """

    area_side: float = Field(default=defaults.DEFAULT_AREA_SIDE, gt=0)
    n_devices: int = Field(default=defaults.DEFAULT_DEVICES, ge=1)
    n_sbs: int = Field(default=defaults.DEFAULT_SBS, ge=1)
    n_rbs: int = Field(default=defaults.DEFAULT_DEVICES, ge=1)
    # hertz
    carrier_freq: float = Field(default=defaults.DEFAULT_CARRIER_FREQ, gt=0)
    subcarriers_per_rb: int = Field(default=defaults.DEFAULT_SUBCARRIERS_PER_RB, ge=1)
    subcarrier_spacing: float = Field(default=defaults.DEFAULT_SUBCARRIER_SPACING, gt=0)
    # dBm
    device_tx_power: float = defaults.DEFAULT_DEVICE_TX_POWER_DBM
    incumbent_tx_power: float = defaults.DEFAULT_INCUMBENT_TX_POWER_DBM
    # dBm/Hz
    noise_density: float = defaults.DEFAULT_NOISE_DENSITY_DBM_HZ
    waterfall_threshold: float = Field(default=defaults.DEFAULT_WATERFALL_THRESHOLD, gt=0)
    # distances below this are clamped so that gains never exceed 1
    min_distance: float = Field(default=defaults.DEFAULT_MIN_DISTANCE, gt=0)
    # when false the incumbent cellular users are silent
    interference: bool = True
    # relative local accuracy is drawn from Uniform(theta_low, theta_high)
    theta_low: float = Field(default=0.0, ge=0, lt=1)
    theta_high: float = Field(default=1.0, gt=0, le=1)
    seed: int = Field(default=defaults.DEFAULT_SEED, ge=0)

    @model_validator(mode="after")
    def _check_theta_range(self) -> "TopologyConfig":
        if self.theta_low >= self.theta_high:
            raise ValueError(f"theta_low ({self.theta_low}) must be below theta_high ({self.theta_high})")
        return self

    @property
    def rb_bandwidth(self) -> float:
        return self.subcarriers_per_rb * self.subcarrier_spacing

    @property
    def noise_power(self) -> float:
        """Thermal noise over one resource block, in watts."""
        return dbm_to_watts(self.noise_density + 10.0 * math.log10(self.rb_bandwidth))


class CostConfig(_Strict):
    # inherits the topology threshold when unset
    waterfall_threshold: float | None = Field(default=None, gt=0)
    unscheduled_policy: UnscheduledPolicy = UnscheduledPolicy.WORST_CASE
    aggregation: Aggregation = Aggregation.MEAN


class OptimizerConfig(_Strict):
    max_iterations: int = Field(default=defaults.DEFAULT_MAX_ITERATIONS, ge=1)
    rel_tolerance: float = Field(default=defaults.DEFAULT_REL_TOLERANCE, gt=0)
    # per-SBS capacity, ceil(n_devices / n_sbs) when unset
    quota: int | None = Field(default=None, ge=1)
    scheme: Scheme = Scheme.PROPOSED
    # raise CapacityExceeded instead of leaving devices unassociated
    strict: bool = False

    def resolve_quota(self, n_devices: int, n_sbs: int) -> int:
        return self.quota if self.quota is not None else math.ceil(n_devices / n_sbs)


class TrainConfig(_Strict):
    local_iters: int = Field(default=defaults.DEFAULT_LOCAL_ITERS, ge=1)
    subglobal_iters: int = Field(default=defaults.DEFAULT_SUBGLOBAL_ITERS, ge=1)
    global_rounds: int = Field(default=defaults.DEFAULT_GLOBAL_ROUNDS, ge=1)
    learning_rate: float = Field(default=defaults.DEFAULT_LEARNING_RATE, gt=0)
    batch_size: int = Field(default=defaults.DEFAULT_BATCH_SIZE, ge=1)
    model_kind: ModelKind = ModelKind.LOGISTIC
    hidden_units: int = Field(default=defaults.DEFAULT_HIDDEN_UNITS, ge=1)
    # drop uploads with the packet error rate of each device's link
    coupled_channel: bool = False
    accuracy_target: float = Field(default=defaults.DEFAULT_ACCURACY_TARGET, gt=0, le=1)
    seed: int = Field(default=defaults.DEFAULT_SEED, ge=0)

    @property
    def iteration_budget(self) -> int:
        """Local epochs per device in one global round (T = E * S)."""
        return self.local_iters * self.subglobal_iters


class DatasetConfig(_Strict):
    root: pathlib.Path = pathlib.Path(".")
    train_images: str = defaults.MNIST_TRAIN_IMAGES
    train_labels: str = defaults.MNIST_TRAIN_LABELS
    test_images: str = defaults.MNIST_TEST_IMAGES
    test_labels: str = defaults.MNIST_TEST_LABELS
    shard_size: int = Field(default=defaults.DEFAULT_SHARD_SIZE, ge=1)
    shards_per_device: int = Field(default=defaults.DEFAULT_SHARDS_PER_DEVICE, ge=1)

    def files(self) -> dict[str, pathlib.Path]:
        return {
            "train_images": self.root / self.train_images,
            "train_labels": self.root / self.train_labels,
            "test_images": self.root / self.test_images,
            "test_labels": self.root / self.test_labels,
        }

    def missing(self) -> list[pathlib.Path]:
        return [path for path in self.files().values() if not path.exists()]


class SurfaceConfig(_Strict):
    points: int = Field(default=50, ge=2)
    sinr_min: float = Field(default=0.1, gt=0)
    sinr_max: float = Field(default=100.0, gt=0)
    theta_min: float = Field(default=0.0, ge=0)
    theta_max: float = Field(default=1.0, le=1)

    @model_validator(mode="after")
    def _check_ranges(self) -> "SurfaceConfig":
        if self.sinr_min >= self.sinr_max:
            raise ValueError("sinr_min must be below sinr_max")
        if self.theta_min >= self.theta_max:
            raise ValueError("theta_min must be below theta_max")
        return self


class ExperimentConfig(_Strict):
    """
    Full description of one experiment, loaded from JSON, TOML or YAML.
    """

    experiment: Experiment
    # replica k runs with seed + k
    seed: int = Field(default=defaults.DEFAULT_SEED, ge=0)
    n_runs: int = Field(default=defaults.DEFAULT_RUNS, ge=1)
    output_dir: pathlib.Path = defaults.DEFAULT_OUTPUT_DIR
    topology: TopologyConfig = TopologyConfig()
    cost: CostConfig = CostConfig()
    optimizer: OptimizerConfig = OptimizerConfig()
    train: TrainConfig = TrainConfig()
    dataset: DatasetConfig | None = None
    surface: SurfaceConfig = SurfaceConfig()
    # optimizer_convergence only
    schemes: list[Scheme] = [Scheme.PROPOSED, Scheme.BASELINE1, Scheme.BASELINE2]
    # ddfl_vs_fl only, each value must divide the iteration budget
    subglobal_sweep: list[int] = [1, 2, 4, 8]

    @model_validator(mode="after")
    def _check_experiment(self) -> "ExperimentConfig":
        if self.experiment == Experiment.DDFL_VS_FL:
            if self.dataset is None:
                raise ValueError("ddfl_vs_fl requires a 'dataset' section")

            budget = self.train.iteration_budget
            for s in self.subglobal_sweep:
                if s < 1 or budget % s != 0:
                    raise ValueError(f"sub-global iterations {s} do not divide the iteration budget T={budget}")

        if self.experiment == Experiment.OPTIMIZER_CONVERGENCE and not self.schemes:
            raise ValueError("optimizer_convergence requires at least one scheme")

        return self

    @classmethod
    def from_path(cls, input_path: pathlib.Path) -> "ExperimentConfig":
        raw = input_path.read_text()
        suffix = input_path.suffix.lower()
        if suffix == ".json":
            return cls.model_validate(json.loads(raw))
        elif suffix == ".toml":
            return cls.model_validate(tomllib.loads(raw))
        elif suffix in (".yml", ".yaml"):
            return parse_yaml_raw_as(cls, raw)

        raise ValueError(f"unsupported configuration format '{suffix}' (expected .json, .toml or .yml)")

    def for_replica(self, run_id: int) -> "ExperimentConfig":
        """Copy of this configuration with every seed bound to replica run_id."""
        seed = self.seed + run_id
        return self.model_copy(
            update={
                "topology": self.topology.model_copy(update={"seed": seed}),
                "train": self.train.model_copy(update={"seed": seed}),
            }
        )


def dbm_to_watts(dbm: float) -> float:
    return float(10.0 ** ((dbm - 30.0) / 10.0))


__all__ = [
    "Experiment",
    "Scheme",
    "Aggregation",
    "UnscheduledPolicy",
    "ModelKind",
    "TopologyConfig",
    "CostConfig",
    "OptimizerConfig",
    "TrainConfig",
    "DatasetConfig",
    "SurfaceConfig",
    "ExperimentConfig",
    "dbm_to_watts",
]
