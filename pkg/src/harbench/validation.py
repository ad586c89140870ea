"""Input validation helpers for the estimator-facing APIs."""

from __future__ import annotations

import numpy as np

from .errors import ChannelMismatchError, NonFiniteInputError, ShapeMismatchError


def check_windows(
    X,
    n_channels: int | None = None,
    window_length: int | None = None,
    require_finite: bool = True,
) -> np.ndarray:
    """Coerce ``X`` to a float64 (windows, time, channels) array and validate it."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 3:
        raise ShapeMismatchError(f"expected a 3D (windows, time, channels) array, got shape {X.shape}")
    if window_length is not None and X.shape[1] != window_length:
        raise ShapeMismatchError(f"expected window length {window_length}, got {X.shape[1]}")
    if n_channels is not None and X.shape[2] != n_channels:
        raise ChannelMismatchError(f"expected {n_channels} channels, got {X.shape[2]}")
    if require_finite and X.size and not np.isfinite(X).all():
        raise NonFiniteInputError("input windows contain NaN or infinite values")
    return X


def check_labels(y, n_windows: int, n_classes: int = 5) -> np.ndarray:
    """Coerce ``y`` to int64 class indices and validate shape and range."""
    y = np.asarray(y)
    if y.shape != (n_windows,):
        raise ShapeMismatchError(f"expected {n_windows} labels, got shape {y.shape}")
    if y.size and (not np.issubdtype(y.dtype, np.integer) or y.min() < 0 or y.max() >= n_classes):
        raise ShapeMismatchError(f"labels must be integers in [0, {n_classes})")
    return y.astype(np.int64)
