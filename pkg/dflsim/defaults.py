import os
import pathlib

DEFAULT_RUNS: int = int(os.getenv("DFLSIM_RUNS", 50))
DEFAULT_SEED: int = int(os.getenv("DFLSIM_SEED", 0))
DEFAULT_WORKERS: int = int(os.getenv("DFLSIM_WORKERS", 0)) or (os.cpu_count() or 4)
DEFAULT_OUTPUT_DIR: pathlib.Path = pathlib.Path(os.getenv("DFLSIM_OUTPUT_DIR", "results"))
DEFAULT_MNIST_DIR: pathlib.Path | None = (
    pathlib.Path(os.environ["DFLSIM_MNIST_DIR"]) if os.getenv("DFLSIM_MNIST_DIR") else None
)

# topology
DEFAULT_AREA_SIDE: float = 1000.0
DEFAULT_DEVICES: int = 54
DEFAULT_SBS: int = 6
DEFAULT_CARRIER_FREQ: float = 2e9
DEFAULT_SUBCARRIERS_PER_RB: int = 12
DEFAULT_SUBCARRIER_SPACING: float = 15e3
DEFAULT_DEVICE_TX_POWER_DBM: float = 23.0
DEFAULT_INCUMBENT_TX_POWER_DBM: float = 20.0
DEFAULT_NOISE_DENSITY_DBM_HZ: float = -174.0
DEFAULT_WATERFALL_THRESHOLD: float = 1.0
DEFAULT_MIN_DISTANCE: float = 1.0

# optimizer
DEFAULT_MAX_ITERATIONS: int = 50
DEFAULT_REL_TOLERANCE: float = 1e-4

# learning
DEFAULT_LOCAL_ITERS: int = 1
DEFAULT_SUBGLOBAL_ITERS: int = 8
DEFAULT_GLOBAL_ROUNDS: int = 30
DEFAULT_LEARNING_RATE: float = 0.05
DEFAULT_BATCH_SIZE: int = 32
DEFAULT_ACCURACY_TARGET: float = 0.85
DEFAULT_SHARD_SIZE: int = 300
DEFAULT_SHARDS_PER_DEVICE: int = 2
DEFAULT_HIDDEN_UNITS: int = 64

MNIST_TRAIN_IMAGES: str = "train-images-idx3-ubyte"
MNIST_TRAIN_LABELS: str = "train-labels-idx1-ubyte"
MNIST_TEST_IMAGES: str = "t10k-images-idx3-ubyte"
MNIST_TEST_LABELS: str = "t10k-labels-idx1-ubyte"
