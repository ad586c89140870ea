"""Central finite-difference verification of the analytic gradients."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .layers import cross_entropy
from .network import forward, loss_and_grad
from .params import WINDOW_LENGTH, init_network

LAYERS = ("conv1", "conv2", "fc1", "fc2", "out")


@dataclass
class GradCheckReport:
    """Worst relative error overall and per layer."""

    max_rel_error: float
    per_layer: dict[str, float] = field(default_factory=dict)
    n_checked: int = 0

    def passed(self, tol: float = 1e-4) -> bool:
        return self.max_rel_error < tol


def gradient_check(
    seed: int = 0,
    modality: int = 6,
    batch_size: int = 4,
    classes: int = 5,
    step: float = 1e-5,
    samples_per_array: int = 200,
) -> GradCheckReport:
    """Compare analytic gradients to central differences, dropout disabled.

    Checks up to ``samples_per_array`` coordinates of each parameter array
    (so at least that many per layer).  Relative error uses a guarded
    denominator max(|analytic|, |numeric|, 1e-8).
    """
    rng = np.random.default_rng(seed)
    params = init_network(modality, classes, seed=rng)
    batch = rng.standard_normal((batch_size, WINDOW_LENGTH, modality))
    labels = rng.integers(0, classes, size=batch_size)

    probs, cache = forward(params, batch)
    _, grads = loss_and_grad(params, cache, probs, labels)

    def loss_at() -> float:
        p, _ = forward(params, batch)
        return cross_entropy(p, labels)

    per_layer = dict.fromkeys(LAYERS, 0.0)
    n_checked = 0
    for name, arr in params.arrays():
        layer = name.rsplit("_", 1)[0]
        grad = dict(grads.arrays())[name]
        count = min(samples_per_array, arr.size)
        coords = rng.choice(arr.size, size=count, replace=False)
        for flat_idx in coords:
            original = arr.flat[flat_idx]
            arr.flat[flat_idx] = original + step
            loss_plus = loss_at()
            arr.flat[flat_idx] = original - step
            loss_minus = loss_at()
            arr.flat[flat_idx] = original
            numeric = (loss_plus - loss_minus) / (2.0 * step)
            analytic = grad.flat[flat_idx]
            rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)
            per_layer[layer] = max(per_layer[layer], rel)
            n_checked += 1
    return GradCheckReport(max(per_layer.values()), per_layer, n_checked)
