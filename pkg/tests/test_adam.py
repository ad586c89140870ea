import numpy as np
import pytest

from harbench.errors import NonFiniteGradientError
from harbench.net import AdamState, NetworkParams, adam_step, init_network


@pytest.fixture
def params():
    return init_network(6, seed=0)


def grad_like(params, value=0.0):
    grads = NetworkParams.zeros_like(params)
    if value:
        for _, arr in grads.arrays():
            arr.fill(value)
    return grads


def test_zero_gradient_leaves_parameters_unchanged(params):
    state = AdamState.zeros(params)
    new_params, new_state = adam_step(params, grad_like(params), state)
    assert new_state.t == 1
    for (_, before), (_, after) in zip(params.arrays(), new_params.arrays()):
        np.testing.assert_array_equal(before, after)


def test_first_step_moves_by_lr_times_sign(params):
    state = AdamState.zeros(params)
    grads = grad_like(params)
    grads.fc1_b[3] = 2.5  # single nonzero coordinate
    lr = 1e-3
    new_params, _ = adam_step(params, grads, state, learning_rate=lr)
    delta = new_params.fc1_b[3] - params.fc1_b[3]
    # m_hat = g, v_hat = g^2  =>  step = -lr * g / (|g| + eps)
    assert delta == pytest.approx(-lr, rel=1e-6)
    others = np.delete(new_params.fc1_b, 3)
    np.testing.assert_array_equal(others, np.delete(params.fc1_b, 3))


def test_two_unit_gradient_steps_match_hand_recurrences(params):
    lr, b1, b2, eps = 1e-3, 0.9, 0.999, 1e-8
    state = AdamState.zeros(params)
    grads = grad_like(params, value=1.0)

    # hand-evaluated recurrences for g=1 at t=1 and t=2
    m1 = 0.1
    v1 = 0.001
    step1 = lr * (m1 / (1 - 0.9)) / (np.sqrt(v1 / (1 - 0.999)) + eps)
    m2 = 0.9 * m1 + 0.1
    v2 = 0.999 * v1 + 0.001
    step2 = lr * (m2 / (1 - 0.9**2)) / (np.sqrt(v2 / (1 - 0.999**2)) + eps)

    p1, state = adam_step(params, grads, state, lr, b1, b2, eps)
    p2, state = adam_step(p1, grads, state, lr, b1, b2, eps)
    assert state.t == 2
    assert p1.out_w[0, 0] == pytest.approx(params.out_w[0, 0] - step1, abs=1e-15)
    assert p2.out_w[0, 0] == pytest.approx(params.out_w[0, 0] - step1 - step2, abs=1e-15)
    assert state.m.out_w[0, 0] == pytest.approx(m2)
    assert state.v.out_w[0, 0] == pytest.approx(v2)


def test_non_finite_gradient_rejected(params):
    grads = grad_like(params)
    grads.conv2_w[0, 0, 0] = np.nan
    with pytest.raises(NonFiniteGradientError):
        adam_step(params, grads, AdamState.zeros(params))


def test_state_is_not_mutated_in_place(params):
    state = AdamState.zeros(params)
    grads = grad_like(params, value=1.0)
    adam_step(params, grads, state)
    assert state.t == 0
    assert np.all(state.m.fc1_w == 0.0)
