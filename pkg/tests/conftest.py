import numpy as np
import pytest

from fastsle._backend import load


def _available():
    names = ["python"]
    try:
        load("cython")
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


BACKENDS = _available()


@pytest.fixture(params=BACKENDS)
def kern(request):
    return load(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
