"""Adam updates with bias correction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NonFiniteGradientError
from .params import NetworkParams


@dataclass
class AdamState:
    """First/second-moment accumulators shaped like the parameters."""

    m: NetworkParams
    v: NetworkParams
    t: int = 0

    @classmethod
    def zeros(cls, params: NetworkParams) -> "AdamState":
        return cls(NetworkParams.zeros_like(params), NetworkParams.zeros_like(params), 0)


def adam_step(
    params: NetworkParams,
    grads: NetworkParams,
    state: AdamState,
    learning_rate: float = 1e-3,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> tuple[NetworkParams, AdamState]:
    """One Adam update; returns new parameters and the advanced state.

    m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;
    p <- p - lr * m_hat / (sqrt(v_hat) + eps)
    """
    if not grads.all_finite():
        raise NonFiniteGradientError("gradient contains NaN or infinite values")
    t = state.t + 1
    bc1 = 1.0 - beta1**t
    bc2 = 1.0 - beta2**t
    new_p, new_m, new_v = {}, {}, {}
    for (name, p), (_, g), (_, m), (_, v) in zip(
        params.arrays(), grads.arrays(), state.m.arrays(), state.v.arrays()
    ):
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * (g * g)
        update = learning_rate * (m / bc1) / (np.sqrt(v / bc2) + epsilon)
        new_p[name] = p - update
        new_m[name] = m
        new_v[name] = v
    return NetworkParams(**new_p), AdamState(NetworkParams(**new_m), NetworkParams(**new_v), t)
