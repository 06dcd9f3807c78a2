import numpy as np
import pytest

from rydgates import catalog


@pytest.fixture(scope="session")
def u1_cases():
    return [catalog.u1_case(i) for i in range(3)]


@pytest.fixture(scope="session")
def u2_cases():
    return [catalog.u2_case(i) for i in range(4)]


@pytest.fixture(scope="session")
def scaled():
    return catalog.scaled_design()


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
