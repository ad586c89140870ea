"""Per-channel standardization of windowed signals."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .errors import EmptyInputError
from .validation import check_windows


class ChannelStandardizer(BaseEstimator, TransformerMixin):
    """Map every channel to zero mean and unit standard deviation.

    Statistics are computed over all cells of all fitted windows
    (population standard deviation).  Channels with a standard deviation
    below ``eps`` are divided by ``eps`` instead, so constant channels
    transform to all zeros.

    Parameters
    ----------
    eps : float
        Floor applied to the per-channel standard deviation before division.

    Attributes
    ----------
    mean_ : ndarray of shape (n_channels,)
    std_ : ndarray of shape (n_channels,)
        Raw population standard deviation, before the floor.
    scale_ : ndarray of shape (n_channels,)
        ``max(std_, eps)``, the divisor actually used.
    n_channels_ : int
    """

    def __init__(self, eps: float = 1e-8):
        self.eps = eps

    def fit(self, X, y=None):
        X = check_windows(X)
        if X.shape[0] == 0:
            raise EmptyInputError("cannot fit channel statistics on zero windows")
        self.n_channels_ = X.shape[2]
        self.mean_ = X.mean(axis=(0, 1))
        self.std_ = X.std(axis=(0, 1))
        self.scale_ = np.maximum(self.std_, self.eps)
        return self

    def transform(self, X):
        check_is_fitted(self, "mean_")
        X = check_windows(X, n_channels=self.n_channels_)
        return (X - self.mean_) / self.scale_
