import numpy as np
import pytest

from synthdata import make_recording, write_subject_files


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def synth_root(tmp_path_factory):
    """Eight synthetic subjects in the raw protocol layout."""
    root = tmp_path_factory.mktemp("synth_pamap2")
    write_subject_files(root)
    return root


@pytest.fixture(scope="session")
def synth_recordings():
    """Three in-memory recordings, enough for fast fold-level tests."""
    return [
        make_recording(sid, np.random.default_rng(40 + sid))
        for sid in (101, 102, 103)
    ]
