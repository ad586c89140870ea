"""Network architecture constants, parameter container, initialization.

Architecture for a 100-sample window with N input channels:

    conv 16 filters k=7 (valid) -> relu -> maxpool 2   100 -> 94 -> 47
    conv 32 filters k=11 (valid) -> relu -> maxpool 2   47 -> 37 -> 18
    flatten (18*32 = 576) -> fc 32 -> relu -> fc 24 -> relu -> fc classes -> softmax

Dropout sits after each pool stage and after each hidden fully-connected
activation; the output layer is never dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from ..errors import UnsupportedModalityError

WINDOW_LENGTH = 100
CONV1_FILTERS = 16
CONV1_KERNEL = 7
CONV2_FILTERS = 32
CONV2_KERNEL = 11
POOL_WIDTH = 2
FC1_UNITS = 32
FC2_UNITS = 24
N_CLASSES = 5

SUPPORTED_MODALITIES = (6, 9, 12, 18)


def trace_lengths(window_length: int = WINDOW_LENGTH) -> tuple[int, int, int, int]:
    """Sequence lengths after conv1, pool1, conv2, pool2."""
    l1 = window_length - CONV1_KERNEL + 1
    p1 = l1 // POOL_WIDTH
    l2 = p1 - CONV2_KERNEL + 1
    p2 = l2 // POOL_WIDTH
    return l1, p1, l2, p2


FLATTEN_UNITS = trace_lengths()[3] * CONV2_FILTERS  # 576


@dataclass
class NetworkParams:
    """All trainable arrays, in declaration order.

    The same container is reused for gradients and Adam moment estimates,
    which are shaped identically.
    """

    conv1_w: np.ndarray  # (16, N, 7)
    conv1_b: np.ndarray  # (16,)
    conv2_w: np.ndarray  # (32, 16, 11)
    conv2_b: np.ndarray  # (32,)
    fc1_w: np.ndarray  # (576, 32)
    fc1_b: np.ndarray  # (32,)
    fc2_w: np.ndarray  # (32, 24)
    fc2_b: np.ndarray  # (24,)
    out_w: np.ndarray  # (24, classes)
    out_b: np.ndarray  # (classes,)

    def arrays(self) -> list[tuple[str, np.ndarray]]:
        return [(f.name, getattr(self, f.name)) for f in fields(self)]

    def copy(self) -> "NetworkParams":
        return NetworkParams(**{name: arr.copy() for name, arr in self.arrays()})

    @classmethod
    def zeros_like(cls, other: "NetworkParams") -> "NetworkParams":
        return cls(**{name: np.zeros_like(arr) for name, arr in other.arrays()})

    @property
    def modality(self) -> int:
        return self.conv1_w.shape[1]

    @property
    def n_classes(self) -> int:
        return self.out_b.shape[0]

    @property
    def n_params(self) -> int:
        return sum(arr.size for _, arr in self.arrays())

    def all_finite(self) -> bool:
        return all(np.isfinite(arr).all() for _, arr in self.arrays())


def param_count(modality: int, classes: int = N_CLASSES) -> int:
    """Trainable parameter count for the architecture above."""
    conv1 = CONV1_FILTERS * (CONV1_KERNEL * modality + 1)
    conv2 = CONV2_FILTERS * (CONV2_KERNEL * CONV1_FILTERS + 1)
    fc1 = FLATTEN_UNITS * FC1_UNITS + FC1_UNITS
    fc2 = FC1_UNITS * FC2_UNITS + FC2_UNITS
    out = FC2_UNITS * classes + classes
    return conv1 + conv2 + fc1 + fc2 + out


#: Initial bound for the output head.  Hidden layers use the He bound,
#: which keeps ReLU activations near unit variance; the head must start
#: near zero instead, so an untrained network predicts near-uniform
#: probabilities (initial cross-entropy = ln(classes) within a few 1e-3).
OUT_INIT_BOUND = 1e-2


def init_network(modality: int, classes: int = N_CLASSES, seed=0) -> NetworkParams:
    """He-style uniform init, U(-sqrt(6/fan_in), +sqrt(6/fan_in)), zero biases.

    The output head draws from U(-0.01, 0.01) instead (see above).
    ``seed`` may be an int or a numpy Generator; the same seed always
    yields identical parameters.
    """
    if modality not in SUPPORTED_MODALITIES:
        raise UnsupportedModalityError(
            f"modality must be one of {SUPPORTED_MODALITIES}, got {modality}"
        )
    rng = np.random.default_rng(seed)

    def uniform(shape, fan_in):
        limit = np.sqrt(6.0 / fan_in)
        return rng.uniform(-limit, limit, size=shape)

    return NetworkParams(
        conv1_w=uniform((CONV1_FILTERS, modality, CONV1_KERNEL), modality * CONV1_KERNEL),
        conv1_b=np.zeros(CONV1_FILTERS),
        conv2_w=uniform((CONV2_FILTERS, CONV1_FILTERS, CONV2_KERNEL), CONV1_FILTERS * CONV2_KERNEL),
        conv2_b=np.zeros(CONV2_FILTERS),
        fc1_w=uniform((FLATTEN_UNITS, FC1_UNITS), FLATTEN_UNITS),
        fc1_b=np.zeros(FC1_UNITS),
        fc2_w=uniform((FC1_UNITS, FC2_UNITS), FC1_UNITS),
        fc2_b=np.zeros(FC2_UNITS),
        out_w=rng.uniform(-OUT_INIT_BOUND, OUT_INIT_BOUND, size=(FC2_UNITS, classes)),
        out_b=np.zeros(classes),
    )
