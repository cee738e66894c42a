"""Pytest configuration and fixtures."""

import math

import pytest

from src.core import collective_cooperativity
from src.core.constants import SPEED_OF_LIGHT
from src.feasibility import get_preset
from src.models import DriveSchedule, DriveShape, MaterialSpec, ProbeSpec, SimGrid


@pytest.fixture
def rare_earth():
    """Rare-earth crystal preset."""
    return get_preset("rare-earth-crystal-typical")


@pytest.fixture
def rare_earth_g2n(rare_earth):
    """Collective coupling of the rare-earth preset."""
    return collective_cooperativity(rare_earth)


@pytest.fixture
def worked_drive(rare_earth):
    """Linear ramp from omega0^2 = 1e17 down to k = 3 in 10 us."""
    return DriveSchedule(
        shape=DriveShape.LINEAR_RAMP,
        omega0=math.sqrt(1e17),
        omega_tau=3.0 * math.sqrt(rare_earth.w_product),
        t_start=0.0,
        t_end=1e-5,
    )


@pytest.fixture
def worked_probe():
    """1 us probe pulse."""
    return ProbeSpec(duration=1e-6)


@pytest.fixture
def gas_material():
    """No inhomogeneous broadening and no decay."""
    return MaterialSpec(name="gas", w12=0.0, w13=0.0)


@pytest.fixture
def scaled_material():
    """Broadened medium in scaled units (rates near 1 rad/s)."""
    return MaterialSpec(name="scaled", w12=0.1, w13=10.0, gamma12=1e-4, gamma13=1e-2)


@pytest.fixture
def reduced_grid():
    """40 km line with 512 cells at Courant number one."""
    return SimGrid.from_courant(z_max=40000.0, n_z=512, t_max=1e-4, n_snapshots=20)


@pytest.fixture
def free_space_grid():
    """Two light-seconds in 40 cells, dt = 0.05 s."""
    return SimGrid.from_courant(z_max=2.0 * SPEED_OF_LIGHT, n_z=41, t_max=15.0, n_snapshots=100)
