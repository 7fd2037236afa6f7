import numpy as np
import pytest

from colehopf.params import make_uniform_grid


@pytest.fixture
def wide_grid():
    return make_uniform_grid(-8.0, 8.0, 2048)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
