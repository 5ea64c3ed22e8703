"""
Parameter container of the direction CNN and its binary file format.

File layout (little-endian):
    magic            8 bytes  b"WTLCNN\\0\\0"
    version          uint16
    width divisor    uint16
    init seed        uint64
    tensor count     uint32
    per tensor       uint8 name length, ASCII name, uint8 ndim, uint32 dims
    payload          float32 values of every tensor, in header order
"""

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from wtl.shared.errors import FormatError, InputOutputError, InvalidArgumentError
from wtl.shared.utils import get_logger

from .architecture import KERNEL, CnnArchitecture, is_buffer

logger = get_logger(__name__)

MAGIC = b"WTLCNN\x00\x00"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sHHQI")


@dataclass
class WeightsBundle:
    """
    Every tensor of the CNN by name, in the fixed architecture order.
    Immutable by convention during inference; owned by the trainer during a step.
    """

    tensors: dict[str, np.ndarray]
    width_divisor: int = 1
    seed: int = 0
    version: int = FORMAT_VERSION
    architecture: CnnArchitecture = field(init=False)

    def __post_init__(self) -> None:
        self.architecture = CnnArchitecture(width_divisor=self.width_divisor)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    @property
    def dtype(self) -> np.dtype:
        return self.tensors["fc.weight"].dtype

    def parameter_names(self) -> list[str]:
        """Learnable tensors (everything except BatchNorm running statistics)."""
        return [name for name in self.tensors if not is_buffer(name)]

    def validate(self) -> None:
        """
        Check tensor names, shapes and BatchNorm variances.

        Raises:
            InvalidArgumentError: Naming the first offending tensor
        """
        expected = self.architecture.tensor_shapes()
        if list(self.tensors) != list(expected):
            missing = [n for n in expected if n not in self.tensors]
            raise InvalidArgumentError(f"weights tensor set mismatch, missing {missing[:3]}")
        for name, shape in expected.items():
            if self.tensors[name].shape != shape:
                raise InvalidArgumentError(
                    f"tensor {name} has shape {self.tensors[name].shape}, expected {shape}"
                )
            if name.endswith("running_var") and np.any(self.tensors[name] <= 0):
                raise InvalidArgumentError(f"tensor {name} must be strictly positive")

    def copy(self) -> "WeightsBundle":
        return WeightsBundle(
            {k: v.copy() for k, v in self.tensors.items()},
            width_divisor=self.width_divisor,
            seed=self.seed,
            version=self.version,
        )

    def astype(self, dtype: type) -> "WeightsBundle":
        return WeightsBundle(
            {k: v.astype(dtype) for k, v in self.tensors.items()},
            width_divisor=self.width_divisor,
            seed=self.seed,
            version=self.version,
        )

    def zeros_like(self) -> "WeightsBundle":
        return WeightsBundle(
            {k: np.zeros_like(v) for k, v in self.tensors.items()},
            width_divisor=self.width_divisor,
            seed=self.seed,
            version=self.version,
        )


def init_weights(
    architecture: CnnArchitecture, seed: int, dtype: type = np.float32
) -> WeightsBundle:
    """
    He-normal kernels, zero biases, BatchNorm scale 1 / shift 0,
    running mean 0 / variance 1.
    """
    rng = np.random.default_rng(seed)
    tensors: dict[str, np.ndarray] = {}
    for name, shape in architecture.tensor_shapes().items():
        if name.endswith(".weight"):
            fan_in = KERNEL * KERNEL * shape[2] if len(shape) == 4 else shape[0]
            value = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)
        elif name.endswith(("gamma", "running_var")):
            value = np.ones(shape)
        else:
            value = np.zeros(shape)
        tensors[name] = value.astype(dtype)

    return WeightsBundle(tensors, width_divisor=architecture.width_divisor, seed=seed)


def save_weights(weights: WeightsBundle, path: Union[str, Path]) -> Path:
    """
    Write a weights file. Loading it back is bit-exact for float32 bundles.

    Raises:
        InputOutputError: If the file cannot be written
    """
    weights.validate()
    path = Path(path)
    parts = [
        _HEADER.pack(MAGIC, FORMAT_VERSION, weights.width_divisor, weights.seed, len(weights.tensors))
    ]
    for name, tensor in weights.tensors.items():
        encoded = name.encode("ascii")
        parts.append(struct.pack("<B", len(encoded)) + encoded)
        parts.append(struct.pack(f"<B{tensor.ndim}I", tensor.ndim, *tensor.shape))
    for tensor in weights.tensors.values():
        parts.append(np.ascontiguousarray(tensor, dtype="<f4").tobytes())

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(b"".join(parts))
    except OSError as e:
        raise InputOutputError(f"cannot write weights {path}: {e}", path=str(path)) from e

    logger.info("weights_saved", path=str(path), tensors=len(weights.tensors))
    return path


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, size: int, what: str) -> bytes:
        if self.pos + size > len(self.data):
            raise FormatError(f"weights file truncated while reading {what}")
        chunk = self.data[self.pos : self.pos + size]
        self.pos += size
        return chunk


def load_weights(path: Union[str, Path]) -> WeightsBundle:
    """
    Read a weights file written by save_weights.

    Raises:
        InputOutputError: If the file does not exist
        FormatError: On bad magic, unsupported version, truncation or a tensor
            whose name or shape does not match the architecture
    """
    path = Path(path)
    if not path.is_file():
        raise InputOutputError(f"weights file not found: {path}", path=str(path))

    reader = _Reader(path.read_bytes())
    magic, version, width_divisor, seed, count = _HEADER.unpack(
        reader.take(_HEADER.size, "header")
    )
    if magic != MAGIC:
        raise FormatError(f"not a weights file (bad magic {magic!r}): {path}")
    if version != FORMAT_VERSION:
        raise FormatError(
            f"unsupported weights format version {version} (expected {FORMAT_VERSION})"
        )

    try:
        expected = CnnArchitecture(width_divisor=width_divisor).tensor_shapes()
    except ValueError as e:
        raise FormatError(f"invalid width divisor {width_divisor} in {path}") from e
    if count != len(expected):
        raise FormatError(f"weights file lists {count} tensors, expected {len(expected)}")

    headers: list[tuple[str, tuple[int, ...]]] = []
    for expected_name, expected_shape in expected.items():
        (name_len,) = struct.unpack("<B", reader.take(1, f"name of {expected_name}"))
        name = reader.take(name_len, f"name of {expected_name}").decode("ascii", "replace")
        (ndim,) = struct.unpack("<B", reader.take(1, f"shape of {name}"))
        shape = struct.unpack(f"<{ndim}I", reader.take(4 * ndim, f"shape of {name}"))
        if name != expected_name:
            raise FormatError(f"tensor {name!r} found where {expected_name!r} was expected")
        if tuple(shape) != expected_shape:
            raise FormatError(f"tensor {name} has shape {tuple(shape)}, expected {expected_shape}")
        headers.append((name, tuple(shape)))

    tensors: dict[str, np.ndarray] = {}
    for name, shape in headers:
        size = int(np.prod(shape))
        raw = reader.take(4 * size, f"payload of {name}")
        tensors[name] = np.frombuffer(raw, dtype="<f4").astype(np.float32).reshape(shape)

    if reader.pos != len(reader.data):
        raise FormatError(f"weights file has {len(reader.data) - reader.pos} trailing bytes")

    logger.info("weights_loaded", path=str(path), width_divisor=width_divisor)
    return WeightsBundle(tensors, width_divisor=width_divisor, seed=seed, version=version)
