import numpy as np
import pytest

from fsir import make_grid


@pytest.fixture(scope="session")
def grid256():
    return make_grid(256)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64)


@pytest.fixture(scope="session")
def grid32():
    return make_grid(32)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240801)
