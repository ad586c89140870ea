import numpy as np
import pytest

from harbench.errors import CacheFormatError
from harbench.net import init_network, load_params, save_params


@pytest.mark.parametrize("modality", [6, 18])
def test_round_trip_is_bit_exact(tmp_path, modality):
    params = init_network(modality, 5, seed=21)
    path = tmp_path / "model.ckpt"
    save_params(params, path)
    back = load_params(path)
    assert back.modality == modality
    assert back.n_classes == 5
    for (name, a), (_, b) in zip(params.arrays(), back.arrays()):
        assert a.tobytes() == b.tobytes(), name


def test_bad_magic(tmp_path):
    path = tmp_path / "model.ckpt"
    path.write_bytes(b"WRONGMAG" + b"\x00" * 100)
    with pytest.raises(CacheFormatError, match="magic"):
        load_params(path)


def test_truncated_payload(tmp_path):
    params = init_network(6, 5, seed=0)
    path = tmp_path / "model.ckpt"
    save_params(params, path)
    path.write_bytes(path.read_bytes()[:-16])
    with pytest.raises(CacheFormatError, match="bytes"):
        load_params(path)
