"""
Binary dataset files.

Layout (little-endian):
    magic         4 bytes  b"WTLD"
    version       uint16
    record count  uint32
    patch shape   3 x uint8  (13, 13, 4)
    records       packed: float32[13,13,4] patch, float32 label (degrees),
                  int32 image id, int32 chain index, uint8 flags
                  (bit 0 jittered, bit 1 validation split)
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from wtl.raster.stack import CHANNELS, PATCH_SIZE
from wtl.shared.errors import FormatError, InputOutputError
from wtl.shared.utils import get_logger

from .labels import DatasetSplit, LabelRecord

logger = get_logger(__name__)

MAGIC = b"WTLD"
FORMAT_VERSION = 1
FLAG_JITTERED = 1
FLAG_VALIDATION = 2

_HEADER = struct.Struct("<4sHI3B")
RECORD_DTYPE = np.dtype(
    [
        ("patch", "<f4", (PATCH_SIZE, PATCH_SIZE, CHANNELS)),
        ("label", "<f4"),
        ("image_id", "<i4"),
        ("chain_index", "<i4"),
        ("flags", "u1"),
    ]
)


def save_dataset(split: DatasetSplit, path: Union[str, Path]) -> Path:
    """Write train records first, then validation records."""
    path = Path(path)
    rows = [(r, 0) for r in split.train] + [(r, FLAG_VALIDATION) for r in split.validation]
    table = np.zeros(len(rows), dtype=RECORD_DTYPE)
    for k, (record, split_flag) in enumerate(rows):
        table[k] = (
            record.patch,
            record.label,
            record.image_id,
            record.chain_index,
            split_flag | (FLAG_JITTERED if record.jittered else 0),
        )

    header = _HEADER.pack(MAGIC, FORMAT_VERSION, len(rows), PATCH_SIZE, PATCH_SIZE, CHANNELS)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(header + table.tobytes())
    except OSError as e:
        raise InputOutputError(f"cannot write dataset {path}: {e}", path=str(path)) from e
    logger.info("dataset_saved", path=str(path), records=len(rows))
    return path


def load_dataset(path: Union[str, Path], seed: int = 0) -> DatasetSplit:
    """
    Raises:
        InputOutputError: If the file does not exist
        FormatError: On bad magic, version, patch shape or size
    """
    path = Path(path)
    if not path.is_file():
        raise InputOutputError(f"dataset file not found: {path}", path=str(path))
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"dataset file truncated while reading header: {path}")

    magic, version, count, *shape = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"not a dataset file (bad magic {magic!r}): {path}")
    if version != FORMAT_VERSION:
        raise FormatError(
            f"unsupported dataset format version {version} (expected {FORMAT_VERSION})"
        )
    if tuple(shape) != (PATCH_SIZE, PATCH_SIZE, CHANNELS):
        raise FormatError(f"unexpected patch shape {tuple(shape)}")
    expected = _HEADER.size + count * RECORD_DTYPE.itemsize
    if len(data) != expected:
        raise FormatError(f"dataset file has {len(data)} bytes, expected {expected}")

    table = np.frombuffer(data, dtype=RECORD_DTYPE, count=count, offset=_HEADER.size)
    split = DatasetSplit(seed=seed)
    for row in table:
        record = LabelRecord(
            patch=np.array(row["patch"], dtype=np.float32),
            label=float(row["label"]),
            image_id=int(row["image_id"]),
            chain_index=int(row["chain_index"]),
            jittered=bool(row["flags"] & FLAG_JITTERED),
        )
        (split.validation if row["flags"] & FLAG_VALIDATION else split.train).append(record)
    logger.info("dataset_loaded", path=str(path), records=count)
    return split
