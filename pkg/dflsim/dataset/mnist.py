import gzip
import pathlib

import numpy as np
import numpy.typing as npt
from loguru import logger

from dflsim.dataset.samples import LabeledData
from dflsim.errors import BadMagic, CountMismatch, DataError, TruncatedFile
from dflsim.models import DatasetConfig

IMAGES_MAGIC: int = 0x00000803
LABELS_MAGIC: int = 0x00000801


def _read(path: pathlib.Path) -> bytes:
    if path.suffix == ".gz":
        with gzip.open(path, "rb") as f:
            return f.read()
    return path.read_bytes()


def _header(raw: bytes, path: pathlib.Path, magic: int, n_dims: int) -> list[int]:
    size = 4 * (1 + n_dims)
    if len(raw) < size:
        raise TruncatedFile(f"{path}: {len(raw)} bytes, header needs {size}")

    fields = [int(v) for v in np.frombuffer(raw, dtype=">u4", count=1 + n_dims)]
    if fields[0] != magic:
        raise BadMagic(f"{path}: magic 0x{fields[0]:08x}, expected 0x{magic:08x}")
    return fields[1:]


def _payload(raw: bytes, path: pathlib.Path, offset: int, expected: int) -> npt.NDArray[np.uint8]:
    if len(raw) - offset < expected:
        raise TruncatedFile(f"{path}: {len(raw) - offset} payload bytes, header announces {expected}")
    return np.frombuffer(raw, dtype=np.uint8, count=expected, offset=offset)


def load_mnist_idx(image_path: pathlib.Path, label_path: pathlib.Path) -> LabeledData:
    """
    Load an IDX image file (magic 0x803) and its IDX label file (magic 0x801), optionally
    gzip-compressed. Images are flattened and scaled to [0, 1].
    """
    images_raw = _read(image_path)
    labels_raw = _read(label_path)

    n_images, rows, cols = _header(images_raw, image_path, IMAGES_MAGIC, 3)
    (n_labels,) = _header(labels_raw, label_path, LABELS_MAGIC, 1)
    if n_images != n_labels:
        raise CountMismatch(f"{image_path} holds {n_images} images, {label_path} holds {n_labels} labels")

    pixels = _payload(images_raw, image_path, 16, n_images * rows * cols)
    labels = _payload(labels_raw, label_path, 8, n_labels)

    features = pixels.reshape(n_images, rows * cols).astype(np.float32) / np.float32(255.0)
    logger.debug(f"loaded {n_images} samples of {rows}x{cols} from {image_path}")

    return LabeledData(features=features, labels=labels.astype(np.int64))


def load_mnist(cfg: DatasetConfig) -> tuple[LabeledData, LabeledData]:
    """Training and test sets described by the dataset configuration."""

    missing = cfg.missing()
    if missing:
        raise DataError(f"missing dataset files: {', '.join(str(p) for p in missing)}")

    files = cfg.files()
    train = load_mnist_idx(files["train_images"], files["train_labels"])
    test = load_mnist_idx(files["test_images"], files["test_labels"])
    return train, test


__all__ = ["load_mnist_idx", "load_mnist"]
