import pytest

from salpeter_lab import Grid1D, make_bump, sample


@pytest.fixture(scope="session")
def bump():
    return make_bump(0.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def default_grid():
    return Grid1D(64.0, 2**14)


@pytest.fixture(scope="session")
def field0(bump, default_grid):
    return sample(bump, default_grid)


@pytest.fixture(scope="session")
def wide_field(bump):
    """Box large enough that periodic images of massless 1/x^2 tails are below 1e-7."""
    return sample(bump, Grid1D(8192.0, 2**21))
