"""Versioned binary model checkpoints.

Layout (little-endian): magic ``HARBNETC``, version u16, modality u16,
class count u16, then every parameter array in declaration order as
float64.  Round-trips are bit-exact.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import CacheFormatError
from .params import (
    CONV1_FILTERS,
    CONV1_KERNEL,
    CONV2_FILTERS,
    CONV2_KERNEL,
    FC1_UNITS,
    FC2_UNITS,
    FLATTEN_UNITS,
    NetworkParams,
)

MAGIC = b"HARBNETC"
VERSION = 1
_HEADER = struct.Struct("<8sHHH")


def _shapes(modality: int, classes: int) -> list[tuple[int, ...]]:
    return [
        (CONV1_FILTERS, modality, CONV1_KERNEL),
        (CONV1_FILTERS,),
        (CONV2_FILTERS, CONV1_FILTERS, CONV2_KERNEL),
        (CONV2_FILTERS,),
        (FLATTEN_UNITS, FC1_UNITS),
        (FC1_UNITS,),
        (FC1_UNITS, FC2_UNITS),
        (FC2_UNITS,),
        (FC2_UNITS, classes),
        (classes,),
    ]


def save_params(params: NetworkParams, path: Path) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, params.modality, params.n_classes))
        for _, arr in params.arrays():
            fh.write(arr.astype("<f8", copy=False).tobytes())


def load_params(path: Path) -> NetworkParams:
    buf = Path(path).read_bytes()
    if len(buf) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, modality, classes = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    shapes = _shapes(modality, classes)
    expected = _HEADER.size + sum(int(np.prod(s)) * 8 for s in shapes)
    if len(buf) != expected:
        raise CacheFormatError(f"{path}: expected {expected} bytes, found {len(buf)}")
    offset = _HEADER.size
    arrays = []
    for shape in shapes:
        count = int(np.prod(shape))
        arrays.append(np.frombuffer(buf, "<f8", count, offset).reshape(shape).copy())
        offset += count * 8
    return NetworkParams(*arrays)
