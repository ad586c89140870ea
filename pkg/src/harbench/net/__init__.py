"""From-scratch 1D CNN: explicit forward/backward passes and Adam updates."""

from .adam import AdamState, adam_step
from .checkpoint import load_params, save_params
from .gradcheck import GradCheckReport, gradient_check
from .layers import conv1d, conv1d_backward, cross_entropy, maxpool, maxpool_backward, softmax
from .network import ForwardCache, evaluate, forward, loss_and_grad, predict
from .params import (
    NetworkParams,
    SUPPORTED_MODALITIES,
    init_network,
    param_count,
    trace_lengths,
)

__all__ = [
    "AdamState",
    "ForwardCache",
    "GradCheckReport",
    "NetworkParams",
    "SUPPORTED_MODALITIES",
    "adam_step",
    "conv1d",
    "conv1d_backward",
    "cross_entropy",
    "evaluate",
    "forward",
    "gradient_check",
    "init_network",
    "load_params",
    "loss_and_grad",
    "maxpool",
    "maxpool_backward",
    "param_count",
    "predict",
    "save_params",
    "softmax",
    "trace_lengths",
]
