"""Forward pass, forward cache, and analytic backpropagation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NonFiniteInputError, ShapeMismatchError
from .layers import (
    PROB_FLOOR,
    conv1d,
    conv1d_backward,
    cross_entropy,
    dropout_mask,
    maxpool,
    maxpool_backward,
    relu,
    relu_backward,
    softmax,
)
from .params import NetworkParams, WINDOW_LENGTH


@dataclass
class ForwardCache:
    """Intermediate values of one batch, kept for the backward pass.

    Dropout masks are None in eval mode (dropout is the identity there).
    """

    x: np.ndarray
    z1: np.ndarray
    pool1_idx: np.ndarray
    mask1: np.ndarray | None
    d1: np.ndarray
    z2: np.ndarray
    pool2_idx: np.ndarray
    mask2: np.ndarray | None
    flat: np.ndarray
    z3: np.ndarray
    mask3: np.ndarray | None
    d3: np.ndarray
    z4: np.ndarray
    mask4: np.ndarray | None
    d4: np.ndarray


def forward(
    params: NetworkParams,
    batch: np.ndarray,
    train: bool = False,
    dropout_rate: float = 0.0,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, ForwardCache]:
    """Class probabilities for a (B, 100, N) batch, plus the layer cache.

    Train mode applies inverted dropout after each pool stage and each
    hidden fully-connected activation; eval mode is deterministic.
    """
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim != 3 or batch.shape[1] != WINDOW_LENGTH or batch.shape[2] != params.modality:
        raise ShapeMismatchError(
            f"expected (B, {WINDOW_LENGTH}, {params.modality}) input, got {batch.shape}"
        )
    if not np.isfinite(batch).all():
        raise NonFiniteInputError("input batch contains NaN or infinite values")
    dropping = train and dropout_rate > 0.0
    if dropping and rng is None:
        raise ValueError("train-mode dropout needs a random generator")

    def drop(a: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
        if not dropping:
            return a, None
        mask = dropout_mask(rng, a.shape, dropout_rate)
        return a * mask, mask

    z1 = conv1d(batch, params.conv1_w, params.conv1_b)
    p1, idx1 = maxpool(relu(z1))
    d1, mask1 = drop(p1)

    z2 = conv1d(d1, params.conv2_w, params.conv2_b)
    p2, idx2 = maxpool(relu(z2))
    d2, mask2 = drop(p2)

    flat = d2.reshape(d2.shape[0], -1)
    z3 = flat @ params.fc1_w + params.fc1_b
    d3, mask3 = drop(relu(z3))

    z4 = d3 @ params.fc2_w + params.fc2_b
    d4, mask4 = drop(relu(z4))

    logits = d4 @ params.out_w + params.out_b
    probs = softmax(logits)
    cache = ForwardCache(
        x=batch, z1=z1, pool1_idx=idx1, mask1=mask1, d1=d1,
        z2=z2, pool2_idx=idx2, mask2=mask2, flat=flat,
        z3=z3, mask3=mask3, d3=d3, z4=z4, mask4=mask4, d4=d4,
    )
    return probs, cache


def loss_and_grad(
    params: NetworkParams,
    cache: ForwardCache,
    probs: np.ndarray,
    labels: np.ndarray,
) -> tuple[float, NetworkParams]:
    """Cross-entropy loss and its gradients w.r.t. every parameter.

    Softmax and cross-entropy are fused, so the logit gradient is
    (probs - onehot) / batch.
    """
    labels = np.asarray(labels)
    b = probs.shape[0]
    if labels.shape != (b,):
        raise ShapeMismatchError(f"expected {b} labels, got shape {labels.shape}")
    n_classes = params.n_classes
    if probs.shape != (b, n_classes):
        raise ShapeMismatchError(f"probs shape {probs.shape} != ({b}, {n_classes})")
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise ShapeMismatchError(f"labels must be in [0, {n_classes})")

    loss = cross_entropy(probs, labels)

    d_logits = probs.copy()
    d_logits[np.arange(b), labels] -= 1.0
    d_logits /= b

    d_out_w = cache.d4.T @ d_logits
    d_out_b = d_logits.sum(axis=0)
    d_d4 = d_logits @ params.out_w.T
    if cache.mask4 is not None:
        d_d4 = d_d4 * cache.mask4
    d_z4 = relu_backward(d_d4, cache.z4)

    d_fc2_w = cache.d3.T @ d_z4
    d_fc2_b = d_z4.sum(axis=0)
    d_d3 = d_z4 @ params.fc2_w.T
    if cache.mask3 is not None:
        d_d3 = d_d3 * cache.mask3
    d_z3 = relu_backward(d_d3, cache.z3)

    d_fc1_w = cache.flat.T @ d_z3
    d_fc1_b = d_z3.sum(axis=0)
    d_flat = d_z3 @ params.fc1_w.T

    d_d2 = d_flat.reshape(b, -1, params.conv2_w.shape[0])
    if cache.mask2 is not None:
        d_d2 = d_d2 * cache.mask2
    d_a2 = maxpool_backward(d_d2, cache.pool2_idx, cache.z2.shape[1])
    d_z2 = relu_backward(d_a2, cache.z2)
    d_conv2_w, d_conv2_b, d_d1 = conv1d_backward(d_z2, cache.d1, params.conv2_w)

    if cache.mask1 is not None:
        d_d1 = d_d1 * cache.mask1
    d_a1 = maxpool_backward(d_d1, cache.pool1_idx, cache.z1.shape[1])
    d_z1 = relu_backward(d_a1, cache.z1)
    d_conv1_w, d_conv1_b, _ = conv1d_backward(d_z1, cache.x, params.conv1_w, need_input_grad=False)

    grads = NetworkParams(
        conv1_w=d_conv1_w, conv1_b=d_conv1_b,
        conv2_w=d_conv2_w, conv2_b=d_conv2_b,
        fc1_w=d_fc1_w, fc1_b=d_fc1_b,
        fc2_w=d_fc2_w, fc2_b=d_fc2_b,
        out_w=d_out_w, out_b=d_out_b,
    )
    return loss, grads


def predict_proba(params: NetworkParams, data: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Eval-mode class probabilities, computed in bounded-memory chunks."""
    data = np.asarray(data, dtype=np.float64)
    pieces = []
    for start in range(0, data.shape[0], chunk):
        probs, _ = forward(params, data[start : start + chunk])
        pieces.append(probs)
    if not pieces:
        return np.zeros((0, params.n_classes))
    return np.concatenate(pieces)


def predict(params: NetworkParams, windows) -> np.ndarray:
    """Predicted class per window; ties break toward the lowest index."""
    data = getattr(windows, "data", windows)
    return predict_proba(params, data).argmax(axis=1)


def evaluate(params: NetworkParams, data: np.ndarray, labels: np.ndarray, chunk: int = 4096) -> tuple[float, float]:
    """Eval-mode (mean cross-entropy, accuracy) over a full window set."""
    data = np.asarray(data, dtype=np.float64)
    labels = np.asarray(labels)
    n = data.shape[0]
    if n == 0:
        raise ShapeMismatchError("cannot evaluate on zero windows")
    total_nll = 0.0
    correct = 0
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        probs, _ = forward(params, data[start:stop])
        picked = probs[np.arange(stop - start), labels[start:stop]]
        total_nll += float(-np.log(np.maximum(picked, PROB_FLOOR)).sum())
        correct += int((probs.argmax(axis=1) == labels[start:stop]).sum())
    return total_nll / n, correct / n
