"""Unit tests for the material, drive, probe and grid models."""

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.integrate import quad

from src.core import DomainError
from src.core.constants import SPEED_OF_LIGHT
from src.models import (
    DriveSchedule,
    DriveShape,
    EnvelopeShape,
    MaterialSpec,
    ProbeSpec,
    RetrievalSpec,
    SimGrid,
)


def test_material_rejects_inverted_widths():
    with pytest.raises(ValidationError):
        MaterialSpec(w12=10.0, w13=1.0)


def test_material_rejects_negative_rates():
    with pytest.raises(ValidationError):
        MaterialSpec(w12=1.0, w13=10.0, gamma13=-1.0)


def test_gas_limit_properties(gas_material):
    assert gas_material.is_gas_limit
    assert gas_material.w_product == 0.0
    assert math.isinf(gas_material.broadening_ratio)


def test_reduced_model_validity_bands():
    assert MaterialSpec(w12=1.0, w13=1000.0).check_reduced_model_validity() == []
    assert len(MaterialSpec(w12=1.0, w13=50.0).check_reduced_model_validity()) == 1
    with pytest.raises(DomainError):
        MaterialSpec(w12=1.0, w13=5.0).check_reduced_model_validity()


class TestDriveSchedule:
    """Control-field profiles."""

    def test_linear_ramp_endpoints_and_slope(self):
        drive = DriveSchedule(omega0=10.0, omega_tau=2.0, t_start=1.0, t_end=3.0)
        assert drive.omega(0.0) == pytest.approx(10.0)
        assert drive.omega(2.0) == pytest.approx(6.0)
        assert drive.omega(5.0) == pytest.approx(2.0)
        assert drive.omega_dot(2.0) == pytest.approx(-4.0)
        assert drive.omega_dot(0.5) == pytest.approx(0.0)
        assert drive.omega_final == 2.0

    def test_retrieval_mirrors_write_ramp(self):
        drive = DriveSchedule(
            omega0=10.0, omega_tau=2.0, t_start=0.0, t_end=2.0, hold_duration=5.0, retrieval=RetrievalSpec()
        )
        assert drive.total_duration == pytest.approx(9.0)
        assert drive.omega(4.0) == pytest.approx(2.0)
        assert drive.omega(8.0) == pytest.approx(6.0)
        assert drive.omega_dot(8.0) == pytest.approx(4.0)
        assert drive.omega(20.0) == pytest.approx(10.0)

    def test_tanh_ramp_is_monotone(self):
        drive = DriveSchedule(shape=DriveShape.TANH_RAMP, omega0=5.0, omega_tau=1.0, t_start=0.0, t_end=1.0)
        t = np.linspace(-0.5, 1.5, 401)
        values = drive.omega(t)
        assert values[0] == pytest.approx(5.0)
        assert values[-1] == pytest.approx(1.0)
        assert np.all(np.diff(values) <= 1e-12)

    def test_derivative_matches_finite_difference(self):
        drive = DriveSchedule(shape=DriveShape.TANH_RAMP, omega0=5.0, omega_tau=1.0, t_start=0.0, t_end=1.0)
        t, h = 0.37, 1e-6
        numeric = (drive.omega(t + h) - drive.omega(t - h)) / (2 * h)
        assert drive.omega_dot(t) == pytest.approx(numeric, rel=1e-6)

    def test_piecewise_fills_plateaus(self):
        drive = DriveSchedule(shape=DriveShape.PIECEWISE, points=[(0.0, 5.0), (1.0, 2.0), (2.0, 4.0)])
        assert drive.omega0 == 5.0
        assert drive.omega_tau == 2.0
        assert drive.omega(0.5) == pytest.approx(3.5)
        assert drive.omega_dot(0.5) == pytest.approx(-3.0)
        assert drive.omega_final == 4.0
        assert drive.total_duration == 2.0

    def test_piecewise_rejects_unordered_times(self):
        with pytest.raises(ValidationError):
            DriveSchedule(shape=DriveShape.PIECEWISE, points=[(0.0, 5.0), (0.0, 2.0)])

    def test_ramp_must_go_down(self):
        with pytest.raises(ValidationError):
            DriveSchedule(omega0=1.0, omega_tau=2.0)
        with pytest.raises(ValidationError):
            DriveSchedule(omega0=2.0, omega_tau=1.0, t_start=1.0, t_end=1.0)

    def test_field_ratio(self):
        drive = DriveSchedule(omega0=10.0, omega_tau=6.0)
        assert drive.field_ratio_k(4.0) == pytest.approx(3.0)
        assert math.isinf(drive.field_ratio_k(0.0))


class TestProbeSpec:
    """Probe envelopes."""

    @pytest.mark.parametrize("shape", [EnvelopeShape.GAUSSIAN, EnvelopeShape.SECH])
    def test_fluence_matches_quadrature(self, shape):
        probe = ProbeSpec(envelope_shape=shape, duration=2.0, peak_amplitude=3.0, arrival_time=1.0)
        numeric, _ = quad(lambda t: float(probe.envelope(t)) ** 2, -60.0, 60.0, limit=200)
        assert probe.fluence == pytest.approx(numeric, rel=1e-6)

    @pytest.mark.parametrize("shape", [EnvelopeShape.GAUSSIAN, EnvelopeShape.SECH])
    def test_envelope_falls_to_one_over_e(self, shape):
        probe = ProbeSpec(envelope_shape=shape, duration=2.0, peak_amplitude=1.0)
        assert float(probe.envelope(2.0)) == pytest.approx(math.exp(-1.0))

    def test_envelope_derivatives(self):
        probe = ProbeSpec(envelope_shape=EnvelopeShape.SECH, duration=1.5, arrival_time=0.3)
        t, h = 0.9, 1e-5
        d1 = (probe.envelope(t + h) - probe.envelope(t - h)) / (2 * h)
        d2 = (probe.envelope(t + h) - 2 * probe.envelope(t) + probe.envelope(t - h)) / h**2
        assert probe.envelope_dot(t) == pytest.approx(d1, rel=1e-6)
        assert probe.envelope_ddot(t) == pytest.approx(d2, rel=1e-4)

    def test_weak_probe_warning(self):
        probe = ProbeSpec(duration=1.0, peak_amplitude=1.0)
        assert probe.check_weak_probe(g=1.0, omega0=1e3) is None
        assert probe.check_weak_probe(g=1.0, omega0=1.0) is not None
        assert math.isinf(probe.weak_probe_parameter(1.0, 0.0))


class TestSimGrid:
    """Discretisation."""

    def test_from_courant_sets_unit_courant(self):
        grid = SimGrid.from_courant(z_max=1000.0, n_z=101, t_max=1e-5)
        assert grid.dz == pytest.approx(10.0)
        assert grid.courant == pytest.approx(1.0)
        assert grid.dt == pytest.approx(10.0 / SPEED_OF_LIGHT)

    def test_cfl_violation_rejected(self):
        with pytest.raises(ValidationError):
            SimGrid(z_max=1000.0, n_z=101, dt=2 * 10.0 / SPEED_OF_LIGHT, t_max=1e-5)

    def test_snapshot_steps(self):
        grid = SimGrid.from_courant(z_max=1000.0, n_z=11, t_max=10 * 100.0 / SPEED_OF_LIGHT, n_snapshots=4)
        steps = grid.snapshot_steps()
        assert steps[0] == 0
        assert steps[-1] == grid.n_steps == 10
        assert np.all(np.diff(steps) > 0)

    def test_class_count(self):
        grid = SimGrid.from_courant(z_max=1.0, n_z=2, t_max=1.0, n_detuning12=3, n_detuning13=5)
        assert grid.n_classes == 15
