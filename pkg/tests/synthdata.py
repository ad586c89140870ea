"""Synthetic fixtures: raw-format subject files and labeled window sets.

Signals are class-dependent sinusoids plus noise, so every channel subset
is separable and small training runs converge quickly.
"""

from __future__ import annotations

import numpy as np

from harbench.ingest import DEFAULT_LABEL_MAP, SubjectRecording, column_indices
from harbench.pipeline import WINDOW_LENGTH, WindowSet

N_RAW_FIELDS = 54
CLASS_CODES = tuple(DEFAULT_LABEL_MAP)  # (2, 3, 4, 12, 13)


def class_signal(label: int, t: np.ndarray, channel: int, phase: float = 0.0) -> np.ndarray:
    """Deterministic per-class waveform, distinguishable from any channel."""
    freq = 1.0 + 1.0 * label  # 1..5 Hz
    amp = 1.0 + 0.1 * channel
    offset = 0.05 * channel
    return amp * np.sin(2.0 * np.pi * freq * t + phase + 0.3 * channel) + offset


def make_recording(
    subject_id: int,
    rng: np.random.Generator,
    run_length: int = 190,
    runs_per_class: int = 2,
    gap_length: int = 30,
    classes: tuple[int, ...] = CLASS_CODES,
    noise: float = 0.05,
) -> SubjectRecording:
    """In-memory recording with labeled activity runs separated by code 0."""
    codes = []
    for _ in range(runs_per_class):
        for code in classes:
            codes.extend([code] * run_length)
            codes.extend([0] * gap_length)
    codes = np.asarray(codes, dtype=np.int16)
    n = codes.size
    timestamps = np.arange(n) * 0.01
    channels = np.empty((n, 18))
    for ch in range(18):
        phase = rng.uniform(0, 2 * np.pi)
        for label in range(5):
            mask = codes == classes[label]
            channels[mask, ch] = class_signal(label, timestamps[mask], ch, phase)
        channels[codes == 0, ch] = 0.0
    channels += noise * rng.standard_normal(channels.shape)
    return SubjectRecording(subject_id, timestamps, codes, channels)


def recording_to_raw_text(rec: SubjectRecording, rng: np.random.Generator) -> str:
    """Render a recording as raw 54-field protocol lines (16g layout).

    The 6g accelerometer triple gets half-scale values so tests can tell
    the two ranges apart; heart rate is NaN except every 11th sample.
    """
    n = len(rec)
    raw = np.full((n, N_RAW_FIELDS), 1.0)
    raw[:, 0] = rec.timestamps
    raw[:, 1] = rec.activity_ids
    raw[:, 2] = np.nan
    raw[::11, 2] = 80.0 + rng.standard_normal(raw[::11, 2].shape)
    cols16 = column_indices("16g")
    cols6 = column_indices("6g")
    for ch in range(18):
        raw[:, cols16[ch]] = rec.channels[:, ch]
    for ch in range(18):
        if cols6[ch] != cols16[ch]:  # gyro columns are shared
            raw[:, cols6[ch]] = 0.5 * rec.channels[:, ch]
    lines = []
    for row in raw:
        lines.append(" ".join("NaN" if np.isnan(v) else f"{v:.6f}" for v in row))
    return "\n".join(lines) + "\n"


def write_subject_files(
    root,
    subject_ids=(101, 102, 103, 104, 105, 106, 107, 108),
    seed: int = 7,
    **kwargs,
) -> None:
    root.mkdir(parents=True, exist_ok=True)
    for subject_id in subject_ids:
        rng = np.random.default_rng(seed + subject_id)
        rec = make_recording(subject_id, rng, **kwargs)
        (root / f"subject{subject_id}.dat").write_text(recording_to_raw_text(rec, rng))


def make_labeled_windows(
    n_per_class: int,
    n_channels: int,
    rng: np.random.Generator,
    subject: int = 101,
    noise: float = 0.05,
    separable: bool = True,
) -> WindowSet:
    """Directly build a balanced, standardization-ready window set."""
    n = 5 * n_per_class
    labels = np.repeat(np.arange(5), n_per_class)
    t = np.arange(WINDOW_LENGTH) / 100.0
    data = np.empty((n, WINDOW_LENGTH, n_channels))
    for i, label in enumerate(labels):
        phase = rng.uniform(0, 2 * np.pi)
        for ch in range(n_channels):
            if separable:
                data[i, :, ch] = class_signal(int(label), t, ch, phase)
            else:
                data[i, :, ch] = rng.standard_normal(WINDOW_LENGTH)
    data += noise * rng.standard_normal(data.shape)
    order = rng.permutation(n)
    return WindowSet(
        data=data[order],
        labels=labels[order],
        subjects=np.full(n, subject, dtype=np.int64),
        segments=np.zeros(n, dtype=np.int64),
        offsets=np.arange(n, dtype=np.int64) * 25,
    )
