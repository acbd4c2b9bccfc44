import pytest

from dirac_toa import PhysParams, make_momentum_grid


@pytest.fixture(scope="session")
def params_m1():
    return PhysParams(m=1.0)


@pytest.fixture(scope="session")
def default_grid():
    """Wide production grid: branches [0.01, 20], 64 nodes each."""
    return make_momentum_grid(0.01, 20.0, 64)


@pytest.fixture(scope="session")
def residual_grid():
    """Branches [0.5, 10]: clear of the p = 0 weight branch point."""
    return make_momentum_grid(0.5, 10.0, 64)


@pytest.fixture(scope="session")
def residual_grid_128():
    return make_momentum_grid(0.5, 10.0, 128)
