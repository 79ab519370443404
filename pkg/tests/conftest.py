import numpy as np
import pytest

from csorbit import load_model


@pytest.fixture(scope="session")
def su2_half():
    return load_model("su2", j=0.5)


@pytest.fixture(scope="session")
def su2_one():
    return load_model("su2", j=1)


@pytest.fixture(scope="session")
def heis10():
    return load_model("heisenberg", trunc=10, margin=3)


@pytest.fixture(scope="session")
def su11_k1():
    return load_model("su11", k=1)


@pytest.fixture(scope="session")
def su3_11():
    return load_model("su3", p=1, q=1)


@pytest.fixture(scope="session")
def su3_21():
    return load_model("su3", p=2, q=1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
