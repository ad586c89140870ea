import math

import numpy as np
import pytest

from harbench.errors import ChannelMismatchError, EmptyInputError
from harbench.preprocessing import ChannelStandardizer


def two_pass_stats(X, channel):
    """Independent oracle: plain-Python two-pass mean and population std."""
    cells = [float(v) for window in X for step in window for v in [step[channel]]]
    mean = sum(cells) / len(cells)
    var = sum((v - mean) ** 2 for v in cells) / len(cells)
    return mean, math.sqrt(var)


def test_constant_channel_gives_std_zero_and_transforms_to_zeros():
    X = np.full((4, 100, 2), 5.0)
    X[:, :, 1] = np.linspace(-1, 1, 400).reshape(4, 100)
    std = ChannelStandardizer().fit(X)
    assert std.mean_[0] == 5.0
    assert std.std_[0] == 0.0
    assert std.scale_[0] == 1e-8  # epsilon floor
    out = std.transform(X)
    assert np.all(out[:, :, 0] == 0.0)


def test_two_point_symmetry():
    X = np.zeros((1, 100, 1))
    X[0, :50, 0] = 0.0
    X[0, 50:, 0] = 2.0
    std = ChannelStandardizer().fit(X)
    assert std.mean_[0] == 1.0
    assert std.std_[0] == 1.0


def test_matches_brute_force_oracle(rng):
    X = rng.standard_normal((7, 100, 3)) * np.array([2.0, 0.5, 10.0]) + np.array([1.0, -3.0, 0.0])
    std = ChannelStandardizer().fit(X)
    for channel in range(3):
        mean, sd = two_pass_stats(X, channel)
        assert std.mean_[channel] == pytest.approx(mean, abs=1e-12)
        assert std.std_[channel] == pytest.approx(sd, abs=1e-12)


def test_fitted_transform_gives_zero_mean_unit_std(rng):
    X = rng.standard_normal((6, 100, 4)) * 3.0 + 7.0
    std = ChannelStandardizer().fit(X)
    out = std.transform(X)
    means = out.mean(axis=(0, 1))
    stds = out.std(axis=(0, 1))
    assert np.abs(means).max() < 1e-9
    assert np.abs(stds - 1.0).max() < 1e-9


def test_idempotence_on_fitted_data(rng):
    X = rng.standard_normal((5, 100, 2)) * 4.0 - 2.0
    first = ChannelStandardizer().fit(X).transform(X)
    refit = ChannelStandardizer().fit(first)
    assert np.abs(refit.mean_).max() < 1e-9
    assert np.abs(refit.std_ - 1.0).max() < 1e-9
    second = refit.transform(first)
    np.testing.assert_allclose(second, first, atol=1e-9)


def test_known_stats_applied_to_known_cell():
    std = ChannelStandardizer()
    std.n_channels_ = 1
    std.mean_ = np.array([1.0])
    std.std_ = np.array([2.0])
    std.scale_ = np.array([2.0])
    X = np.full((1, 100, 1), 5.0)
    assert std.transform(X)[0, 0, 0] == 2.0


def test_channel_count_mismatch(rng):
    std = ChannelStandardizer().fit(rng.standard_normal((2, 100, 3)))
    with pytest.raises(ChannelMismatchError):
        std.transform(rng.standard_normal((2, 100, 4)))


def test_empty_input_rejected():
    with pytest.raises(EmptyInputError):
        ChannelStandardizer().fit(np.zeros((0, 100, 3)))


def test_sklearn_params_round_trip():
    std = ChannelStandardizer(eps=1e-6)
    assert std.get_params() == {"eps": 1e-6}
    clone = ChannelStandardizer(**std.get_params())
    assert clone.eps == 1e-6
