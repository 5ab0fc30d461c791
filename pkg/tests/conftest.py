import pytest
from hypothesis import HealthCheck, settings

from support import k4, k4m, p3
from dyncc.graph import SignedGraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def fix_p3():
    return p3()


@pytest.fixture
def fix_k4():
    return k4()


@pytest.fixture
def fix_k4m():
    return k4m()


@pytest.fixture
def fix_empty():
    return SignedGraph()
