"""Discretisation and ramp-speed behaviour of the full Maxwell-Bloch model."""

import numpy as np
import pytest

from src.bloch import run_storage_protocol
from src.core.constants import SPEED_OF_LIGHT
from src.models import DriveSchedule, DriveShape, MaterialSpec, ProbeSpec, RetrievalSpec, SimGrid

pytestmark = pytest.mark.slow


def test_halving_step_and_cell_keeps_efficiency():
    material = MaterialSpec(name="convergence", w12=0.0, w13=0.02)
    drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=0.2, t_start=0.0, t_end=128.0)
    probe = ProbeSpec(duration=10.0, arrival_time=25.0)

    def efficiency(n_z: int) -> float:
        grid = SimGrid.from_courant(
            z_max=8.0 * SPEED_OF_LIGHT, n_z=n_z, t_max=128.0, n_detuning13=8, lorentz_cutoff=10.0, n_snapshots=10
        )
        return run_storage_protocol(material, drive, probe, grid, g2n=0.25).efficiency

    coarse, fine = efficiency(401), efficiency(801)
    assert fine > 0.1
    assert abs(coarse - fine) / fine < 0.01


@pytest.fixture(scope="module")
def ramp_efficiencies():
    """Write, hold and read in a homogeneous medium with a lossy excited state."""
    material = MaterialSpec(name="homogeneous", w12=0.0, w13=0.0, gamma13=1.0)
    probe = ProbeSpec(duration=40.0, arrival_time=100.0)
    results = []
    for tau in (3.0, 8.0, 20.0):
        drive = DriveSchedule(
            shape=DriveShape.LINEAR_RAMP,
            omega0=1.0,
            omega_tau=0.0,
            t_start=200.0,
            t_end=200.0 + tau,
            hold_duration=5.0,
            retrieval=RetrievalSpec(),
        )
        t_max = 410.0 + 2.0 * tau
        grid = SimGrid.from_courant(z_max=110.0 * SPEED_OF_LIGHT, n_z=2201, t_max=t_max, n_snapshots=20)
        results.append(run_storage_protocol(material, drive, probe, grid, g2n=1.0).efficiency)
    return results


def test_slower_ramps_store_more(ramp_efficiencies):
    assert np.all(np.diff(ramp_efficiencies) > 0)


def test_stored_pulse_is_recovered(ramp_efficiencies):
    assert 0.0 < ramp_efficiencies[0] < ramp_efficiencies[-1] <= 1.0
