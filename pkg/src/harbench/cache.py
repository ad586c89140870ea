"""Binary columnar cache for parsed subject recordings.

Layout (all little-endian):

    magic            8 bytes  b"HARBCACH"
    version          u16
    accel flag       u8       0 = 16g accelerometer, 1 = 6g
    reserved         u8
    subject id       u32
    sample count     u64
    timestamps       f64 * n
    activity codes   i16 * n
    channel columns  f64 * n, once per channel in canonical order

Round-trips are bit-exact, including NaN payloads for missing cells.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .channels import ALL_CHANNELS
from .errors import CacheFormatError
from .ingest import ACCEL_RANGES, SubjectRecording

MAGIC = b"HARBCACH"
VERSION = 1
_HEADER = struct.Struct("<8sHBBIQ")


def write_cache(rec: SubjectRecording, path: Path) -> None:
    """Serialize a recording; the file is written atomically via a temp name."""
    n = len(rec)
    accel_flag = ACCEL_RANGES.index(rec.accel_range)
    tmp = Path(path).with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, accel_flag, 0, rec.subject_id, n))
        fh.write(rec.timestamps.astype("<f8", copy=False).tobytes())
        fh.write(rec.activity_ids.astype("<i2", copy=False).tobytes())
        for c in range(len(ALL_CHANNELS)):
            fh.write(rec.channels[:, c].astype("<f8", copy=False).tobytes())
    tmp.replace(path)


def read_cache(path: Path) -> SubjectRecording:
    """Read a cache file back into a recording; validates header and size."""
    buf = Path(path).read_bytes()
    if len(buf) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, accel_flag, _, subject_id, n = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    if accel_flag >= len(ACCEL_RANGES):
        raise CacheFormatError(f"{path}: bad accelerometer flag {accel_flag}")
    n_channels = len(ALL_CHANNELS)
    expected = _HEADER.size + n * 8 + n * 2 + n_channels * n * 8
    if len(buf) != expected:
        raise CacheFormatError(f"{path}: expected {expected} bytes, found {len(buf)}")

    offset = _HEADER.size
    timestamps = np.frombuffer(buf, "<f8", n, offset).copy()
    offset += n * 8
    codes = np.frombuffer(buf, "<i2", n, offset).copy()
    offset += n * 2
    columns = []
    for _ in range(n_channels):
        columns.append(np.frombuffer(buf, "<f8", n, offset))
        offset += n * 8
    channels = np.stack(columns, axis=1) if n else np.empty((0, n_channels))
    return SubjectRecording(
        int(subject_id), timestamps, codes, channels, ACCEL_RANGES[accel_flag]
    )


def cache_path(cache_dir: Path, subject_id: int) -> Path:
    return Path(cache_dir) / f"subject{subject_id}.cache"


def read_cache_if_valid(path: Path, accel_range: str) -> SubjectRecording | None:
    """Load a cache entry, or None when absent, corrupt, or range-mismatched."""
    try:
        rec = read_cache(path)
    except (FileNotFoundError, CacheFormatError):
        return None
    if rec.accel_range != accel_range:
        return None
    return rec


def load_recordings(
    data_root: Path,
    accel_range: str = "16g",
    cache_dir: Path | None = None,
    refresh: bool = False,
) -> list[SubjectRecording]:
    """Load every subject under ``data_root``, via the cache when possible.

    Parsed recordings are written back to ``cache_dir`` so later runs skip
    the raw-text parse.  ``refresh`` forces a reparse.
    """
    from .ingest import discover_subject_files, load_subject_file

    files = discover_subject_files(Path(data_root))
    if not files:
        raise FileNotFoundError(f"no subject*.dat files under {data_root}")
    recordings = []
    for subject_id in sorted(files):
        rec = None
        if cache_dir is not None and not refresh:
            rec = read_cache_if_valid(cache_path(cache_dir, subject_id), accel_range)
        if rec is None:
            rec = load_subject_file(files[subject_id], accel_range)
            if cache_dir is not None:
                Path(cache_dir).mkdir(parents=True, exist_ok=True)
                write_cache(rec, cache_path(cache_dir, subject_id))
        recordings.append(rec)
    return recordings
