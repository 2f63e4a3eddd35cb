import numpy as np
import pytest

from borndisp import (
    Direction,
    GBetaSpec,
    gaussian_potential,
    make_gbeta,
    make_grid,
    sphere_rule,
)


@pytest.fixture(scope="session")
def grid2():
    return make_grid(2, 256, 16.0)


@pytest.fixture(scope="session")
def grid3():
    return make_grid(3, 128, 16.0)


@pytest.fixture(scope="session")
def gauss2(grid2):
    return gaussian_potential(0.5, grid2)


@pytest.fixture(scope="session")
def gauss3(grid3):
    return gaussian_potential(0.5, grid3)


@pytest.fixture(scope="session")
def gbeta3(grid3):
    """g_beta at n = 3, beta = 1 on the acceptance grid (N = 128, L = 16)."""
    return make_gbeta(GBetaSpec(beta=1.0, bump_radius=2.0, grid=grid3))


@pytest.fixture(scope="session")
def gbeta3_fine():
    """Same potential synthesized at N = 256 (cleaner high-frequency tail)."""
    return make_gbeta(GBetaSpec(beta=1.0, bump_radius=2.0, grid=make_grid(3, 256, 16.0)))


@pytest.fixture(scope="session")
def gbeta2(grid2):
    return make_gbeta(GBetaSpec(beta=1.0, bump_radius=2.0, grid=grid2))


@pytest.fixture(scope="session")
def theta2():
    return Direction(np.array([-1.0, 0.0]))


@pytest.fixture(scope="session")
def theta3():
    return Direction(np.array([-1.0, 0.0, 0.0]))


@pytest.fixture(scope="session")
def rule2():
    return sphere_rule(2, 4)


@pytest.fixture(scope="session")
def rule3():
    return sphere_rule(3, 4)
