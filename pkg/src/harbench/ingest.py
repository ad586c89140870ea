"""Parsing of raw PAMAP2 protocol files into in-memory recordings.

A protocol file carries one sample per line: 54 whitespace-separated
decimal fields with the literal ``NaN`` marking missing cells.

    field 0      timestamp [s]
    field 1      activity id
    field 2      heart rate [bpm]          (dropped)
    fields 3-19  hand IMU block
    fields 20-36 chest IMU block
    fields 37-53 ankle IMU block

Each 17-field IMU block holds: temperature (1), +-16g accelerometer (3),
+-6g accelerometer (3), gyroscope (3), magnetometer (3), orientation (4).
Only one accelerometer triple plus the gyroscope triple are retained per
IMU; the 16g unit is the default because the 6g unit saturates during
vigorous motion.  Temperature, magnetometer, orientation and heart rate
are discarded at parse time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping

import numpy as np

from .channels import ALL_CHANNELS, Kind, Location
from .errors import EmptyFileError, MalformedLineError

FIELDS_PER_LINE = 54
SAMPLE_PERIOD_S = 0.01  # IMUs sampled at 100 Hz

#: Activity codes documented for the dataset.  Protocol files use a subset.
VALID_ACTIVITY_CODES = frozenset(
    {0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 13, 16, 17, 18, 19, 20, 24}
)

#: Raw activity code -> class label for the five activities this study keeps.
DEFAULT_LABEL_MAP: dict[int, int] = {2: 0, 3: 1, 4: 2, 12: 3, 13: 4}

CLASS_NAMES = ("sitting", "standing", "walking", "ascending stairs", "descending stairs")

ACCEL_RANGES = ("16g", "6g")

_BLOCK_START = {Location.HAND: 3, Location.CHEST: 20, Location.ANKLE: 37}
# offsets inside a 17-field IMU block
_ACCEL_16G_OFFSET = 1
_ACCEL_6G_OFFSET = 4
_GYRO_OFFSET = 7


def column_indices(accel_range: str = "16g") -> tuple[int, ...]:
    """Raw-file column of each retained channel, in canonical channel order."""
    if accel_range not in ACCEL_RANGES:
        raise ValueError(f"accel_range must be one of {ACCEL_RANGES}, got {accel_range!r}")
    accel_offset = _ACCEL_16G_OFFSET if accel_range == "16g" else _ACCEL_6G_OFFSET
    cols = []
    for ch in ALL_CHANNELS:
        base = _BLOCK_START[ch.location]
        offset = accel_offset if ch.kind == Kind.ACCEL else _GYRO_OFFSET
        cols.append(base + offset + ch.axis)
    return tuple(cols)


@dataclass(frozen=True)
class SubjectRecording:
    """One participant's time-aligned samples, restricted to the 18 channels.

    Arrays are locked read-only on construction; recordings are safe to
    share across threads.
    """

    subject_id: int
    timestamps: np.ndarray  # (n,) float64 seconds
    activity_ids: np.ndarray  # (n,) int16 raw dataset codes
    channels: np.ndarray  # (n, 18) float64, NaN = missing
    accel_range: str = "16g"

    def __post_init__(self):
        n = self.timestamps.shape[0]
        if self.activity_ids.shape != (n,) or self.channels.shape != (n, len(ALL_CHANNELS)):
            raise ValueError("per-sample arrays must have identical length")
        for arr in (self.timestamps, self.activity_ids, self.channels):
            arr.flags.writeable = False

    def __len__(self) -> int:
        return self.timestamps.shape[0]


@dataclass(frozen=True)
class ActivitySegment:
    """A maximal run of samples sharing one selected activity.

    ``start``/``stop`` index the parent recording, half-open.
    """

    subject_id: int
    class_label: int
    start: int
    stop: int

    def __len__(self) -> int:
        return self.stop - self.start


def parse_subject_file(source: IO[str], subject_id: int, accel_range: str = "16g") -> SubjectRecording:
    """Parse one protocol file from a text stream.

    Every non-blank line must carry exactly 54 parseable fields; violations
    raise :class:`MalformedLineError` with the 1-based line number.  Missing
    sensor cells (``NaN``) are preserved as NaN.
    """
    if not 101 <= subject_id <= 109:
        raise ValueError(f"subject_id must be in 101..109, got {subject_id}")
    cols = column_indices(accel_range)

    tokens: list[str] = []
    line_numbers: list[int] = []
    for line_no, line in enumerate(source, start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != FIELDS_PER_LINE:
            raise MalformedLineError(
                line_no, f"expected {FIELDS_PER_LINE} fields, found {len(parts)}"
            )
        tokens.extend(parts)
        line_numbers.append(line_no)

    n = len(line_numbers)
    if n == 0:
        raise EmptyFileError(f"subject {subject_id}: no samples")

    try:
        values = np.asarray(tokens, dtype=np.float64)
    except ValueError:
        _raise_unparseable(tokens, line_numbers)
        raise AssertionError("unreachable")  # pragma: no cover
    values = values.reshape(n, FIELDS_PER_LINE)

    timestamps = values[:, 0].copy()
    bad = np.flatnonzero(~np.isfinite(timestamps))
    if bad.size:
        raise MalformedLineError(line_numbers[bad[0]], "non-finite timestamp")
    steps = np.diff(timestamps)
    bad = np.flatnonzero(steps < 0)
    if bad.size:
        raise MalformedLineError(line_numbers[bad[0] + 1], "timestamps decrease")

    raw_codes = values[:, 1]
    bad = np.flatnonzero(~np.isfinite(raw_codes) | (raw_codes != np.floor(raw_codes)))
    if bad.size:
        raise MalformedLineError(line_numbers[bad[0]], "activity id is not an integer")
    codes = raw_codes.astype(np.int16)
    bad = np.flatnonzero(~np.isin(codes, list(VALID_ACTIVITY_CODES)))
    if bad.size:
        raise MalformedLineError(
            line_numbers[bad[0]], f"unknown activity code {int(codes[bad[0]])}"
        )

    channels = values[:, cols].copy()
    return SubjectRecording(subject_id, timestamps, codes, channels, accel_range)


def _raise_unparseable(tokens: list[str], line_numbers: list[int]) -> None:
    # Slow path, entered only after bulk conversion failed: locate the
    # offending token to report its line.
    for i, tok in enumerate(tokens):
        try:
            float(tok)
        except ValueError:
            raise MalformedLineError(
                line_numbers[i // FIELDS_PER_LINE], f"unparseable number {tok!r}"
            ) from None


_SUBJECT_FILE_RE = re.compile(r"^subject(\d{3})\.dat$")


def load_subject_file(path: Path, accel_range: str = "16g") -> SubjectRecording:
    """Parse a ``subjectNNN.dat`` file, taking the subject id from the name."""
    m = _SUBJECT_FILE_RE.match(path.name)
    if not m:
        raise ValueError(f"cannot infer subject id from file name {path.name!r}")
    with open(path, "r", encoding="ascii") as fh:
        return parse_subject_file(fh, int(m.group(1)), accel_range)


def discover_subject_files(data_root: Path) -> dict[int, Path]:
    """Locate ``subjectNNN.dat`` files under ``data_root`` or ``data_root/Protocol``."""
    candidates: dict[int, Path] = {}
    for directory in (Path(data_root), Path(data_root) / "Protocol"):
        if not directory.is_dir():
            continue
        for path in sorted(directory.glob("subject*.dat")):
            m = _SUBJECT_FILE_RE.match(path.name)
            if m:
                candidates.setdefault(int(m.group(1)), path)
    return candidates


def extract_segments(
    rec: SubjectRecording, label_map: Mapping[int, int] = DEFAULT_LABEL_MAP
) -> list[ActivitySegment]:
    """Maximal contiguous runs of samples whose raw code is in ``label_map``.

    Samples carrying unmapped codes (including the transient code 0)
    contribute to no segment.
    """
    codes = rec.activity_ids
    if codes.size == 0:
        return []
    change = np.flatnonzero(np.diff(codes) != 0) + 1
    starts = np.concatenate(([0], change))
    stops = np.concatenate((change, [codes.size]))
    segments = []
    for start, stop in zip(starts, stops):
        code = int(codes[start])
        if code in label_map:
            segments.append(
                ActivitySegment(rec.subject_id, label_map[code], int(start), int(stop))
            )
    return segments
