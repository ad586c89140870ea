"""From recordings to normalized, windowed, labeled datasets.

Windows are 100 samples (1 s at 100 Hz) with a 25-sample slide, so
consecutive windows from one segment overlap by 75 samples.  A window is
kept only when every cell of the requested channels is present after
short-gap interpolation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from typing import IO, Mapping, Sequence

import numpy as np

from .channels import CHANNEL_INDEX, ChannelId, Kind, Location, channels_for
from .errors import InsufficientSubjectsError, LeakageError
from .ingest import DEFAULT_LABEL_MAP, ActivitySegment, SubjectRecording, extract_segments
from .preprocessing import ChannelStandardizer

WINDOW_LENGTH = 100
WINDOW_STRIDE = 25
DEFAULT_MAX_GAP = 20  # samples (200 ms); longer sensor dropouts invalidate windows

NORM_SCOPES = ("train", "global")


@dataclass(frozen=True)
class SignalCombination:
    """One catalog entry: a named subset of the 18 channels."""

    id: str
    name: str
    channels: tuple[ChannelId, ...]

    @property
    def modality(self) -> int:
        return len(self.channels)

    @property
    def column_indices(self) -> tuple[int, ...]:
        """Positions of this combination's channels inside an 18-wide vector."""
        return tuple(CHANNEL_INDEX[ch] for ch in self.channels)


_ALL = tuple(Location)
_BOTH = (Kind.ACCEL, Kind.GYRO)

_CATALOG: tuple[SignalCombination, ...] = tuple(
    SignalCombination(id=cid, name=name, channels=channels_for(locs, kinds))
    for cid, name, locs, kinds in [
        ("a", "Gyrometer", _ALL, (Kind.GYRO,)),
        ("b", "Accelerometer", _ALL, (Kind.ACCEL,)),
        ("c", "All 3 IMUs", _ALL, _BOTH),
        ("d", "Ankle IMU", (Location.ANKLE,), _BOTH),
        ("e", "Hand IMU", (Location.HAND,), _BOTH),
        ("f", "Chest IMU", (Location.CHEST,), _BOTH),
        ("g", "Hand and Ankle Gyrometer", (Location.HAND, Location.ANKLE), (Kind.GYRO,)),
        ("h", "Hand and Ankle Accelerometer", (Location.HAND, Location.ANKLE), (Kind.ACCEL,)),
        ("i", "Hand and Ankle IMU", (Location.HAND, Location.ANKLE), _BOTH),
        ("j", "Chest and Ankle Gyrometer", (Location.CHEST, Location.ANKLE), (Kind.GYRO,)),
        ("k", "Chest and Ankle Accelerometer", (Location.CHEST, Location.ANKLE), (Kind.ACCEL,)),
        ("l", "Chest and Ankle IMU", (Location.CHEST, Location.ANKLE), _BOTH),
        ("m", "Hand and Chest Gyrometer", (Location.HAND, Location.CHEST), (Kind.GYRO,)),
        ("n", "Hand and Chest Accelerometer", (Location.HAND, Location.CHEST), (Kind.ACCEL,)),
        ("o", "Hand and Chest IMU", (Location.HAND, Location.CHEST), _BOTH),
    ]
)

COMBINATION_IDS = tuple(c.id for c in _CATALOG)


def combination_catalog() -> list[SignalCombination]:
    """All 15 signal combinations in catalog order a-o."""
    return list(_CATALOG)


def get_combination(combo_id: str) -> SignalCombination:
    for combo in _CATALOG:
        if combo.id == combo_id:
            return combo
    raise KeyError(f"unknown signal combination {combo_id!r}")


@dataclass(frozen=True)
class WindowSet:
    """A labeled batch of windows plus per-window provenance.

    ``offsets`` are absolute sample indices into the source recording, so
    ``(subjects[i], segments[i], offsets[i])`` pins down where window ``i``
    came from.
    """

    data: np.ndarray  # (n_windows, WINDOW_LENGTH, n_channels) float64
    labels: np.ndarray  # (n_windows,) int64
    subjects: np.ndarray  # (n_windows,) int64
    segments: np.ndarray  # (n_windows,) int64 segment ordinal within the recording
    offsets: np.ndarray  # (n_windows,) int64 window start in recording samples

    def __post_init__(self):
        n = self.data.shape[0]
        if self.data.ndim != 3:
            raise ValueError("data must be (windows, time, channels)")
        for arr in (self.labels, self.subjects, self.segments, self.offsets):
            if arr.shape != (n,):
                raise ValueError("provenance arrays must match the window count")

    def __len__(self) -> int:
        return self.data.shape[0]

    @property
    def n_channels(self) -> int:
        return self.data.shape[2]

    def take(self, indices) -> "WindowSet":
        return WindowSet(
            self.data[indices],
            self.labels[indices],
            self.subjects[indices],
            self.segments[indices],
            self.offsets[indices],
        )

    def subsample(self, factor: int) -> "WindowSet":
        """Keep every ``factor``-th window (desk-scale runs)."""
        if factor < 1:
            raise ValueError("subsample factor must be >= 1")
        if factor == 1:
            return self
        return self.take(slice(None, None, factor))

    @classmethod
    def empty(cls, n_channels: int) -> "WindowSet":
        zero = np.zeros(0, dtype=np.int64)
        return cls(np.zeros((0, WINDOW_LENGTH, n_channels)), zero, zero, zero, zero)

    @classmethod
    def concat(cls, sets: Sequence["WindowSet"], n_channels: int | None = None) -> "WindowSet":
        if not sets:
            if n_channels is None:
                raise ValueError("cannot concatenate zero window sets without a channel count")
            return cls.empty(n_channels)
        return cls(
            np.concatenate([s.data for s in sets]),
            np.concatenate([s.labels for s in sets]),
            np.concatenate([s.subjects for s in sets]),
            np.concatenate([s.segments for s in sets]),
            np.concatenate([s.offsets for s in sets]),
        )


def clean_missing(samples: np.ndarray, max_gap: int = DEFAULT_MAX_GAP) -> np.ndarray:
    """Interpolate short per-channel gaps; longer gaps stay missing.

    A gap of at most ``max_gap`` consecutive NaNs with finite neighbors on
    both sides is filled linearly.  Gaps touching the segment boundary have
    only one neighbor and are left as NaN.
    """
    if max_gap < 0:
        raise ValueError("max_gap must be >= 0")
    out = np.array(samples, dtype=np.float64)
    n = out.shape[0]
    for c in range(out.shape[1]):
        col = out[:, c]
        missing = np.isnan(col)
        if not missing.any():
            continue
        edges = np.flatnonzero(np.diff(np.r_[False, missing, False]))
        for start, stop in zip(edges[0::2], edges[1::2]):
            if start == 0 or stop == n or stop - start > max_gap:
                continue
            left = col[start - 1]
            right = col[stop]
            frac = np.arange(1, stop - start + 1) / (stop - start + 1)
            col[start:stop] = left + frac * (right - left)
    return out


def window_offsets(segment_length: int) -> np.ndarray:
    """Window start offsets within a segment: 0, 25, 50, ..."""
    if segment_length < WINDOW_LENGTH:
        return np.zeros(0, dtype=np.int64)
    return np.arange(0, segment_length - WINDOW_LENGTH + 1, WINDOW_STRIDE, dtype=np.int64)


def segment_windows(
    cleaned: np.ndarray,
    segment: ActivitySegment,
    combo: SignalCombination,
    segment_index: int = 0,
) -> WindowSet:
    """Slice one cleaned segment into labeled windows for a combination.

    ``cleaned`` holds the segment's samples for all 18 channels; windows
    still containing a missing cell in the combination's channels are
    dropped.
    """
    if cleaned.shape[0] != len(segment):
        raise ValueError("cleaned sample block does not match the segment span")
    series = cleaned[:, combo.column_indices]
    offsets = window_offsets(series.shape[0])
    if offsets.size == 0:
        return WindowSet.empty(combo.modality)

    # Prefix-sum of per-sample badness gives O(1) per-window validity.
    bad = np.isnan(series).any(axis=1)
    cum = np.concatenate(([0], np.cumsum(bad)))
    valid = cum[offsets + WINDOW_LENGTH] - cum[offsets] == 0
    offsets = offsets[valid]
    if offsets.size == 0:
        return WindowSet.empty(combo.modality)

    view = np.lib.stride_tricks.sliding_window_view(series, WINDOW_LENGTH, axis=0)
    data = np.ascontiguousarray(view[offsets].transpose(0, 2, 1))
    n = offsets.size
    return WindowSet(
        data=data,
        labels=np.full(n, segment.class_label, dtype=np.int64),
        subjects=np.full(n, segment.subject_id, dtype=np.int64),
        segments=np.full(n, segment_index, dtype=np.int64),
        offsets=offsets + segment.start,
    )


def build_subject_windows(
    rec: SubjectRecording,
    combo: SignalCombination,
    label_map: Mapping[int, int] = DEFAULT_LABEL_MAP,
    max_gap: int = DEFAULT_MAX_GAP,
) -> WindowSet:
    """All windows of one subject for one combination, across its segments."""
    sets = []
    for index, segment in enumerate(extract_segments(rec, label_map)):
        block = rec.channels[segment.start : segment.stop]
        cleaned = clean_missing(block, max_gap)
        ws = segment_windows(cleaned, segment, combo, index)
        if len(ws):
            sets.append(ws)
    return WindowSet.concat(sets, n_channels=combo.modality)


def subject_window_counts(
    rec: SubjectRecording,
    label_map: Mapping[int, int] = DEFAULT_LABEL_MAP,
    max_gap: int = DEFAULT_MAX_GAP,
) -> dict[int, int]:
    """Per-class window counts using all 18 channels."""
    ws = build_subject_windows(rec, get_combination("c"), label_map, max_gap)
    classes = sorted(set(label_map.values()))
    counts = dict.fromkeys(classes, 0)
    for label, count in zip(*np.unique(ws.labels, return_counts=True)):
        counts[int(label)] = int(count)
    return counts


def eligible_subjects(
    recordings: Sequence[SubjectRecording],
    label_map: Mapping[int, int] = DEFAULT_LABEL_MAP,
    max_gap: int = DEFAULT_MAX_GAP,
) -> list[int]:
    """Subjects with at least one clean window for every class, ascending.

    Eligibility uses all 18 channels, so one scan serves every
    combination.
    """
    if not recordings:
        raise InsufficientSubjectsError("no recordings supplied")
    classes = set(label_map.values())
    eligible = []
    for rec in recordings:
        counts = subject_window_counts(rec, label_map, max_gap)
        if all(counts.get(cls, 0) > 0 for cls in classes):
            eligible.append(rec.subject_id)
    eligible.sort()
    if len(eligible) < 2:
        raise InsufficientSubjectsError(
            f"need at least 2 eligible subjects, found {len(eligible)}"
        )
    return eligible


def standardize_pair(
    train: WindowSet,
    val: WindowSet,
    scope: str,
    fit_windows: WindowSet | None = None,
) -> tuple[WindowSet, WindowSet, ChannelStandardizer]:
    """Fit channel statistics per ``scope`` and apply them to both sets.

    ``scope`` is ``"train"`` (fit on the training windows, leakage-free) or
    ``"global"`` (fit on ``fit_windows``, typically the whole dataset).
    """
    if scope not in NORM_SCOPES:
        raise ValueError(f"norm scope must be one of {NORM_SCOPES}, got {scope!r}")
    standardizer = ChannelStandardizer()
    standardizer.fit(train.data if scope == "train" else fit_windows.data)
    train = replace(train, data=standardizer.transform(train.data))
    val = replace(val, data=standardizer.transform(val.data))
    return train, val, standardizer


def build_fold_datasets(
    recordings: Sequence[SubjectRecording],
    combo: SignalCombination,
    fold: tuple[Sequence[int], int],
    scope: str = "train",
    label_map: Mapping[int, int] = DEFAULT_LABEL_MAP,
    max_gap: int = DEFAULT_MAX_GAP,
    subsample: int = 1,
) -> tuple[WindowSet, WindowSet, ChannelStandardizer]:
    """Assemble standardized train/validation window sets for one fold.

    ``fold`` is ``(train_subject_ids, val_subject_id)``.  With global
    scope the statistics are fitted over the windows of every recording
    passed in, not just the fold's training side.
    """
    train_subjects, val_subject = fold
    if val_subject in set(train_subjects):
        raise LeakageError(f"subject {val_subject} is in both train and validation")
    by_subject = {
        rec.subject_id: build_subject_windows(rec, combo, label_map, max_gap).subsample(subsample)
        for rec in recordings
    }
    missing = [s for s in (*train_subjects, val_subject) if s not in by_subject]
    if missing:
        raise KeyError(f"no recordings for subjects {missing}")
    train = WindowSet.concat([by_subject[s] for s in train_subjects], combo.modality)
    val = by_subject[val_subject]
    fit_windows = None
    if scope == "global":
        fit_windows = WindowSet.concat(list(by_subject.values()), combo.modality)
    return standardize_pair(train, val, scope, fit_windows)


def dump_windows_csv(ws: WindowSet, stream: IO[str]) -> None:
    """Debug dump: one row per window (subject, label, offset, flat values)."""
    writer = csv.writer(stream)
    n_values = ws.data.shape[1] * ws.data.shape[2]
    writer.writerow(["subject", "label", "offset", *(f"v{i}" for i in range(n_values))])
    for i in range(len(ws)):
        writer.writerow(
            [int(ws.subjects[i]), int(ws.labels[i]), int(ws.offsets[i])]
            + [repr(float(v)) for v in ws.data[i].ravel()]
        )
