"""Full Maxwell-Bloch scenarios checked against the reduced model and closed forms."""

import math

import numpy as np
import pytest

from src.bloch import analyze_trajectory, eit_transmission, run_storage_protocol
from src.cli.validation import (
    CROSS_MODEL_TOLERANCE,
    check_averaging_oracle,
    check_cross_model,
    dephasing_scenario,
    run_scenario,
    run_validation_suite,
    slow_light_scenario,
)
from src.core.constants import SPEED_OF_LIGHT
from src.models import DriveSchedule, DriveShape, MaterialSpec, ProbeSpec, SimGrid
from src.polariton import effective_group_velocity

pytestmark = pytest.mark.slow

ANGLES = [math.pi / 6, math.pi / 4, math.pi / 3]


@pytest.fixture(scope="module", params=ANGLES, ids=["pi/6", "pi/4", "pi/3"])
def slow_light(request):
    scenario = slow_light_scenario(request.param)
    trajectory = run_scenario(scenario)
    return scenario, trajectory, analyze_trajectory(trajectory)


class TestSlowLight:
    """Constant control: the probe crosses the medium as a dark polariton."""

    def test_peak_velocity(self, slow_light):
        scenario, _, metrics = slow_light
        expected = effective_group_velocity(scenario.drive.omega0, scenario.material, scenario.g2n)
        assert metrics.group_velocity is not None
        assert metrics.group_velocity == pytest.approx(expected, rel=0.05)

    def test_compression_ratio(self, slow_light):
        scenario, _, metrics = slow_light
        ratio = effective_group_velocity(scenario.drive.omega0, scenario.material, scenario.g2n) / SPEED_OF_LIGHT
        assert metrics.compression_ratio is not None
        assert metrics.compression_ratio == pytest.approx(ratio, rel=0.10)

    def test_transmission_matches_window(self, slow_light):
        scenario, trajectory, metrics = slow_light
        expected = eit_transmission(
            scenario.material,
            scenario.drive,
            scenario.grid,
            scenario.g2n,
            trajectory.step_times,
            trajectory.input_series,
        )
        assert metrics.efficiency == pytest.approx(expected, rel=0.02)
        assert metrics.efficiency > 0.3

    def test_pulse_has_left_the_medium(self, slow_light):
        _, trajectory, _ = slow_light
        peak = np.abs(trajectory.output_series).max()
        assert abs(trajectory.output_series[-1]) < 1e-3 * peak


class TestStorage:
    """Write, hold and read with a ramped control."""

    def test_full_model_matches_reduced_prediction(self):
        result = check_cross_model()
        assert result.passed, result.detail
        assert abs(result.value - result.expected) / result.expected <= CROSS_MODEL_TOLERANCE

    def test_spin_broadening_limits_storage_time(self):
        material = dephasing_scenario(0.0).material
        short = run_scenario(dephasing_scenario(0.02 / material.w12))
        long = run_scenario(dephasing_scenario(2.0 / material.w12))
        assert short.efficiency > 0
        assert short.efficiency >= 2.0 * long.efficiency


def test_probe_absorbed_below_power_condition():
    """Omega^2 far below W12 W13 leaves no transparency window for the probe."""
    material = MaterialSpec(name="opaque", w12=0.1, w13=1.0)
    drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=0.01, t_start=0.0, t_end=60.0)
    probe = ProbeSpec(duration=10.0, arrival_time=25.0)
    grid = SimGrid(
        z_max=2.01 * SPEED_OF_LIGHT,
        n_z=201,
        dt=0.008,
        t_max=60.0,
        n_detuning13=16,
        lorentz_cutoff=10.0,
        n_snapshots=50,
    )
    trajectory = run_storage_protocol(material, drive, probe, grid, g2n=2.5)
    assert trajectory.efficiency < 0.1


def test_averaging_oracle():
    assert check_averaging_oracle().passed


def test_quick_validation_suite():
    results = run_validation_suite(include_simulation=False)
    failed = [r.name for r in results if not r.passed]
    assert failed == []
