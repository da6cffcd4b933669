import numpy as np
import pytest

from pathminima.scenarios import builtin

BUILTIN_NAMES = ["planar_car", "planar_manipulator_2dof", "ball_sphere_3d",
                 "ball_lattice_3d", "empty_2d"]


@pytest.fixture(scope="session")
def scenarios():
    return {name: builtin(name) for name in BUILTIN_NAMES}


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
