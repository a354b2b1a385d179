import pytest

from kwire.model import ModelParams


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-accuracy sweeps over the frequency axis")


@pytest.fixture
def params():
    """W=2, T'=0.5, L=20 with v_F = a = 1."""
    return ModelParams(W=2.0, t_prime=0.5, L=20)


@pytest.fixture
def biased(params):
    return params.with_bias(1.0)
