import numpy as np
import pytest

from dmp import IntegrationConfig, make_system
from scenarios import build_case1, build_case2
from wtltl import default_registry


@pytest.fixture
def registry():
    return default_registry()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def case1():
    return build_case1()


@pytest.fixture
def case2_prefer_a():
    return build_case2(2.0, 1.0)


@pytest.fixture
def case2_prefer_b():
    return build_case2(1.0, 2.0)


@pytest.fixture
def unit_system():
    """1-D DMP from 0 to 1 with default gains"""
    return make_system([0.0], [1.0])


@pytest.fixture
def integration():
    return IntegrationConfig()
