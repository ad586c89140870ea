"""Layer primitives: valid 1D convolution, width-2 max pooling, softmax.

Inputs are channels-last: a batch is (B, L, C), a single sample (L, C).
All math is float64.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatchError


def conv1d(x: np.ndarray, weights: np.ndarray, biases: np.ndarray) -> np.ndarray:
    """Valid cross-correlation.

    out[t, o] = bias[o] + sum_{c,k} x[t+k, c] * weights[o, c, k]

    ``x`` may be (L, C) or batched (B, L, C); the output drops the batch
    axis when the input did.
    """
    squeeze = x.ndim == 2
    if squeeze:
        x = x[None]
    n_out, n_in, kernel = weights.shape
    if x.ndim != 3 or x.shape[2] != n_in:
        raise ShapeMismatchError(
            f"conv input shape {x.shape} does not match weights {weights.shape}"
        )
    length = x.shape[1]
    if length < kernel:
        raise ShapeMismatchError(f"input length {length} shorter than kernel {kernel}")
    if biases.shape != (n_out,):
        raise ShapeMismatchError(f"bias shape {biases.shape} != ({n_out},)")
    # (B, L-K+1, C, K) sliding view, contracted against (O, C, K) in one GEMM
    view = np.lib.stride_tricks.sliding_window_view(x, kernel, axis=1)
    out = np.tensordot(view, weights, axes=([2, 3], [1, 2])) + biases
    return out[0] if squeeze else out


def conv1d_backward(
    d_out: np.ndarray, x: np.ndarray, weights: np.ndarray, need_input_grad: bool = True
) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """Gradients of a valid cross-correlation: (d_weights, d_biases, d_x).

    ``need_input_grad=False`` skips d_x (useless for the first layer).
    """
    l_out = d_out.shape[1]
    kernel = weights.shape[2]
    d_w = np.empty_like(weights)
    for k in range(kernel):
        # (B, l_out, O) against (B, l_out, C), contracted over batch and time
        d_w[:, :, k] = np.tensordot(d_out, x[:, k : k + l_out, :], axes=([0, 1], [0, 1]))
    d_b = d_out.sum(axis=(0, 1))
    if not need_input_grad:
        return d_w, d_b, None
    # d_x is the full correlation of d_out with the kernel-flipped weights
    padded = np.pad(d_out, ((0, 0), (kernel - 1, kernel - 1), (0, 0)))
    view = np.lib.stride_tricks.sliding_window_view(padded, kernel, axis=1)
    d_x = np.tensordot(view, weights[:, :, ::-1], axes=([2, 3], [0, 2]))
    return d_w, d_b, d_x


def maxpool(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Width-2, stride-2 max pooling; an odd trailing element is dropped.

    Returns the pooled array and the argmax (0 or 1) per pair for backward
    routing.  Ties route to the earlier index.
    """
    squeeze = x.ndim == 2
    if squeeze:
        x = x[None]
    b, length, c = x.shape
    l_out = length // 2
    pairs = x[:, : 2 * l_out, :].reshape(b, l_out, 2, c)
    argmax = pairs.argmax(axis=2)
    out = np.take_along_axis(pairs, argmax[:, :, None, :], axis=2).squeeze(2)
    if squeeze:
        return out[0], argmax[0]
    return out, argmax


def maxpool_backward(d_out: np.ndarray, argmax: np.ndarray, input_length: int) -> np.ndarray:
    """Route gradients to the argmax positions; everything else gets zero."""
    b, l_out, c = d_out.shape
    d_pairs = np.zeros((b, l_out, 2, c))
    np.put_along_axis(d_pairs, argmax[:, :, None, :], d_out[:, :, None, :], axis=2)
    d_x = np.zeros((b, input_length, c))
    d_x[:, : 2 * l_out, :] = d_pairs.reshape(b, 2 * l_out, c)
    return d_x


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def relu_backward(d_out: np.ndarray, z: np.ndarray) -> np.ndarray:
    return d_out * (z > 0.0)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max-subtraction for stability."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


PROB_FLOOR = 1e-12


def cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean negative log-probability of the true class, floored at 1e-12."""
    picked = probs[np.arange(probs.shape[0]), labels]
    return float(-np.log(np.maximum(picked, PROB_FLOOR)).mean())


def dropout_mask(rng: np.random.Generator, shape: tuple[int, ...], rate: float) -> np.ndarray:
    """Inverted-dropout mask: 0 with probability ``rate``, else 1/(1-rate)."""
    keep = 1.0 - rate
    return (rng.random(shape) < keep) / keep
