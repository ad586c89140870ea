"""Minibatch-Adam training of the 1D CNN behind a scikit-learn estimator API."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .errors import DivergedLossError
from .net import AdamState, adam_step, evaluate, forward, init_network, loss_and_grad
from .net.network import predict_proba
from .net.params import WINDOW_LENGTH
from .validation import check_labels, check_windows


class EarlyStopper:
    """Stop after ``patience`` epochs without a >= ``min_delta`` loss drop.

    ``update`` returns True when training should stop.  The reference point
    only moves on a significant improvement, so a slow drift below the
    threshold still trips the stop.
    """

    def __init__(self, patience: int, min_delta: float):
        self.patience = patience
        self.min_delta = min_delta
        self.best = np.inf
        self.stale_epochs = 0

    def update(self, loss: float) -> bool:
        if self.best - loss >= self.min_delta:
            self.best = loss
            self.stale_epochs = 0
            return False
        self.stale_epochs += 1
        return self.stale_epochs >= self.patience


class ConvNet1DClassifier(BaseEstimator, ClassifierMixin):
    """1D CNN classifier for fixed-length (100-sample) multichannel windows.

    Training shuffles windows each epoch with the seeded generator, applies
    inverted dropout, and early-stops on the monitored loss.  The kept
    parameters are the snapshot from the best monitored epoch.  With the
    same seed and inputs, fits are bit-identical on one numpy build.

    Parameters mirror the training hyperparameters; all are plain values so
    ``get_params``/``set_params``/``clone`` work as usual.

    Attributes (after fit)
    ----------------------
    params_ : NetworkParams
        Best-epoch parameter snapshot, used by predict.
    history_ : ndarray of shape (n_epochs, 3)
        Per-epoch (train_loss, val_loss, val_accuracy).
    best_epoch_ : int
        1-based epoch of the lowest validation loss.
    best_val_loss_, best_val_accuracy_ : float
    n_epochs_ : int
        Epochs actually trained (<= max_epochs).
    """

    def __init__(
        self,
        learning_rate: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
        dropout_rate: float = 0.3,
        batch_size: int = 64,
        max_epochs: int = 3000,
        patience: int = 50,
        min_delta: float = 1e-4,
        seed: int = 0,
        n_classes: int = 5,
    ):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.dropout_rate = dropout_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.min_delta = min_delta
        self.seed = seed
        self.n_classes = n_classes

    def fit(self, X, y, validation: tuple | None = None):
        """Train until early stopping or ``max_epochs``.

        ``validation`` is an optional ``(X_val, y_val)`` pair monitored for
        early stopping; without it the training set itself is monitored
        (useful for overfit checks only -- it measures memorization).
        """
        X = check_windows(X, window_length=WINDOW_LENGTH)
        y = check_labels(y, X.shape[0], self.n_classes)
        if X.shape[0] == 0:
            raise ValueError("cannot fit on zero windows")
        if validation is None:
            X_val, y_val = X, y
        else:
            X_val = check_windows(validation[0], n_channels=X.shape[2], window_length=WINDOW_LENGTH)
            y_val = check_labels(validation[1], X_val.shape[0], self.n_classes)

        modality = X.shape[2]
        params = init_network(modality, self.n_classes, seed=self.seed)
        adam = AdamState.zeros(params)
        rng = np.random.default_rng(self.seed)

        stopper = EarlyStopper(self.patience, self.min_delta)
        history: list[tuple[float, float, float]] = []
        best_loss = np.inf
        best_params = params.copy()
        best_acc = 0.0
        best_epoch = 0
        n = X.shape[0]

        for epoch in range(1, self.max_epochs + 1):
            order = rng.permutation(n)
            nll_sum = 0.0
            for start in range(0, n, self.batch_size):
                idx = order[start : start + self.batch_size]
                probs, cache = forward(
                    params, X[idx], train=True, dropout_rate=self.dropout_rate, rng=rng
                )
                loss, grads = loss_and_grad(params, cache, probs, y[idx])
                params, adam = adam_step(
                    params, grads, adam,
                    learning_rate=self.learning_rate,
                    beta1=self.beta1, beta2=self.beta2, epsilon=self.epsilon,
                )
                nll_sum += loss * idx.size
            train_loss = nll_sum / n
            val_loss, val_acc = evaluate(params, X_val, y_val)
            if not np.isfinite(val_loss):
                raise DivergedLossError(f"validation loss became {val_loss} at epoch {epoch}")
            history.append((train_loss, val_loss, val_acc))
            if val_loss < best_loss:
                best_loss = val_loss
                best_params = params.copy()
                best_acc = val_acc
                best_epoch = epoch
            if stopper.update(val_loss):
                break

        self.modality_ = modality
        self.classes_ = np.arange(self.n_classes)
        self.params_ = best_params
        self.final_params_ = params
        self.history_ = np.asarray(history)
        self.n_epochs_ = len(history)
        self.best_epoch_ = best_epoch
        self.best_val_loss_ = float(best_loss)
        self.best_val_accuracy_ = float(best_acc)
        return self

    def predict_proba(self, X) -> np.ndarray:
        check_is_fitted(self, "params_")
        X = check_windows(X, n_channels=self.modality_, window_length=WINDOW_LENGTH)
        return predict_proba(self.params_, X)

    def predict(self, X) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)
