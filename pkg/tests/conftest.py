import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import zenopath as zp

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def grover8():
    return zp.grover_instance(8, 1)


@pytest.fixture(scope="session")
def grover8_const(grover8):
    """Reference constant schedule at eps = 0.1 on the 8-dim search problem."""
    return zp.constant_rate(grover8.path, grover8.gap, 0.1)


@pytest.fixture(scope="session")
def qlsp10():
    return zp.diag_qlsp_instance(10.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
