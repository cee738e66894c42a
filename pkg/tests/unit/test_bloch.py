"""Unit tests for the Maxwell-Bloch reference solver."""

import math
from dataclasses import replace

import numpy as np
import pytest

from src.bloch import (
    BlochSystem,
    ClassCoefficients,
    EnsembleState,
    analyze_trajectory,
    atom_derivatives,
    check_time_step,
    eit_transmission,
    ground_state,
    rk4_atoms,
    run_storage_protocol,
    step_system,
)
from src.bloch.equations import S12, S13, S22, S33
from src.bloch.solver import _flag_gain
from src.cli.validation import check_trace_conservation
from src.core import DomainError
from src.core.constants import SPEED_OF_LIGHT
from src.ensemble import DetuningGrid, build_lorentzian_grid, ensemble_average
from src.models import DriveSchedule, DriveShape, MaterialSpec, ProbeSpec, SimGrid


def test_ground_state():
    rho = ground_state(3, 4)
    assert rho.shape == (6, 3, 4)
    assert np.all(rho[0] == 1.0)
    assert np.all(rho[1:] == 0.0)


def test_ground_state_is_stationary_without_probe(scaled_material):
    coeffs = ClassCoefficients.from_detunings(np.array([0.1]), np.array([2.0]), scaled_material)
    rho = ground_state(1, 1)
    np.testing.assert_array_equal(atom_derivatives(rho, 0.0, 1.5, coeffs, scaled_material), 0.0)


def test_first_order_steady_state(scaled_material):
    """The linear-response coherences make the 1-2 and 1-3 equations stationary."""
    delta12, delta13 = np.array([0.05]), np.array([-3.0])
    coeffs = ClassCoefficients.from_detunings(delta12, delta13, scaled_material)
    ge, omega = 1e-6, 2.0
    denom = omega**2 + coeffs.g12 * coeffs.g13
    rho = ground_state(1, 1)
    rho[S12] = -ge * omega / denom
    rho[S13] = -1j * coeffs.g12 * ge / denom
    derivative = atom_derivatives(rho, ge, omega, coeffs, scaled_material)
    assert abs(derivative[S12, 0, 0]) < 1e-18
    assert abs(derivative[S13, 0, 0]) < 1e-18


def test_class_coefficients_follow_detunings(scaled_material):
    coeffs = ClassCoefficients.from_detunings(np.array([1.0]), np.array([3.0]), scaled_material)
    assert coeffs.g12[0] == pytest.approx(-1j - scaled_material.gamma12)
    assert coeffs.g13[0] == pytest.approx(-3j - scaled_material.gamma13)
    assert coeffs.g23[0] == pytest.approx(-2j - scaled_material.gamma23)


def test_trace_conserved_without_decay():
    assert check_trace_conservation(steps=100).passed


def test_rk4_decays_coherence(scaled_material):
    coeffs = ClassCoefficients.from_detunings(np.zeros(1), np.zeros(1), scaled_material)
    rho = ground_state(1, 1)
    rho[S12] = 0.1
    for _ in range(100):
        rho = rk4_atoms(rho, 0.0, (0.0, 0.0, 0.0), coeffs, scaled_material, 1.0)
    assert abs(rho[S12, 0, 0]) == pytest.approx(0.1 * math.exp(-100 * scaled_material.gamma12), rel=1e-9)


def test_time_step_must_resolve_outer_classes(scaled_material):
    grid = SimGrid.from_courant(
        z_max=2.0 * SPEED_OF_LIGHT, n_z=41, t_max=1.0, n_detuning13=4, lorentz_cutoff=10.0
    )
    with pytest.raises(DomainError):
        check_time_step(scaled_material, grid)
    check_time_step(scaled_material, grid.model_copy(update={"n_detuning13": 1}))


def test_time_step_must_resolve_collective_coupling(gas_material, free_space_grid):
    drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=1.0)
    check_time_step(gas_material, free_space_grid, g2n=1.0, drive=drive)
    with pytest.raises(DomainError):
        check_time_step(gas_material, free_space_grid, g2n=1e4, drive=drive)
    with pytest.raises(DomainError):
        run_storage_protocol(gas_material, drive, ProbeSpec(duration=1.0), free_space_grid, g2n=1e4)


def _free_system(material, drive, probe, dz):
    detunings = DetuningGrid(build_lorentzian_grid(0.0, 1), build_lorentzian_grid(0.0, 1))
    coeffs = ClassCoefficients.for_grid(detunings, material)
    return BlochSystem(
        material=material, drive=drive, probe=probe, detunings=detunings, coeffs=coeffs, g=0.5, n_atoms=16.0, dz=dz
    )


def test_step_rejects_cfl_violation(gas_material):
    drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=1.0)
    system = _free_system(gas_material, drive, ProbeSpec(duration=1.0), dz=SPEED_OF_LIGHT * 0.05)
    assert system.g2n == pytest.approx(4.0)
    state = EnsembleState(time=0.0, field=np.zeros(5, dtype=complex), rho=ground_state(5, 1))
    step_system(state, system, 0.05)
    with pytest.raises(DomainError):
        step_system(state, system, 0.1)


class TestFreePropagation:
    """g2N = 0 leaves the probe untouched."""

    @pytest.fixture
    def trajectory(self, gas_material, free_space_grid):
        drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=1.0, t_start=0.0, t_end=15.0)
        probe = ProbeSpec(duration=1.0, arrival_time=4.0)
        return run_storage_protocol(gas_material, drive, probe, free_space_grid, g2n=0.0)

    def test_full_transmission(self, trajectory):
        assert trajectory.efficiency == pytest.approx(1.0, abs=1e-6)
        assert trajectory.fidelity == pytest.approx(1.0, abs=1e-6)

    def test_output_is_delayed_input(self, trajectory):
        delay = 40
        np.testing.assert_allclose(trajectory.output_series[delay:], trajectory.input_series[:-delay], atol=1e-15)

    def test_peak_moves_at_light_speed(self, trajectory):
        metrics = analyze_trajectory(trajectory)
        assert metrics.group_velocity == pytest.approx(SPEED_OF_LIGHT, rel=0.02)

    def test_atoms_stay_in_ground_state(self, trajectory):
        assert np.all(trajectory.sigma12_bar == 0)
        assert np.all(trajectory.sigma33_bar == 0)

    def test_gain_is_capped_and_flagged(self, trajectory):
        amplified = replace(trajectory, output_series=1.5 * trajectory.output_series, flags=[])
        assert amplified.raw_efficiency == pytest.approx(2.25, rel=1e-6)
        assert amplified.efficiency == 1.0
        _flag_gain(amplified)
        assert len(amplified.flags) == 1
        _flag_gain(trajectory)
        assert trajectory.flags == []


def test_negative_coupling_rejected(gas_material, free_space_grid):
    drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=1.0)
    with pytest.raises(DomainError):
        run_storage_protocol(gas_material, drive, ProbeSpec(duration=1.0), free_space_grid, g2n=-1.0)


def test_short_run_with_threads():
    """Threaded and serial ensemble updates give identical results."""
    material = MaterialSpec(name="threaded", w12=0.01, w13=0.1)
    grid = SimGrid.from_courant(
        z_max=1.0 * SPEED_OF_LIGHT, n_z=21, t_max=3.0, n_detuning13=4, lorentz_cutoff=10.0, n_snapshots=5
    )
    drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=1.0, t_start=0.0, t_end=3.0)
    probe = ProbeSpec(duration=0.5, arrival_time=1.0)
    serial = run_storage_protocol(material, drive, probe, grid, g2n=1.0, workers=1)
    threaded = run_storage_protocol(material, drive, probe, grid, g2n=1.0, workers=2)
    np.testing.assert_array_equal(serial.field, threaded.field)
    assert serial.times[0] == 0.0
    assert serial.field.shape == (len(serial.times), grid.n_z)


def test_excitation_conserved_without_decay():
    """Probe energy plus excited population is constant when every rate is zero."""
    material = MaterialSpec(name="lossless", w12=0.01, w13=0.1)
    detunings = DetuningGrid(build_lorentzian_grid(0.01, 2, 10.0), build_lorentzian_grid(0.1, 4, 10.0))
    system = BlochSystem(
        material=material,
        drive=DriveSchedule(shape=DriveShape.CONSTANT, omega0=1.0),
        probe=ProbeSpec(duration=1.0, arrival_time=1e6),
        detunings=detunings,
        coeffs=ClassCoefficients.for_grid(detunings, material),
        g=0.2,
        n_atoms=100.0,
        dz=SPEED_OF_LIGHT * 0.01,
    )
    cells = np.arange(200)
    field0 = 1e-3 * np.exp(-(((cells - 60) / 10.0) ** 2)).astype(complex)
    state = EnsembleState(time=0.0, field=field0, rho=ground_state(200, detunings.n_classes))

    def atomic(s):
        return system.n_atoms * float(np.sum(ensemble_average((s.rho[S22] + s.rho[S33]).real, detunings)))

    start = float(np.sum(np.abs(state.field) ** 2))
    for _ in range(100):
        state = step_system(state, system, 0.01)
    total = float(np.sum(np.abs(state.field) ** 2)) + atomic(state)
    assert total == pytest.approx(start, rel=1e-4)
    assert atomic(state) > 0.1 * start


def test_constant_drive_transmission_matches_window():
    material = MaterialSpec(name="window", w12=0.0, w13=0.1)
    grid = SimGrid.from_courant(
        z_max=1.0 * SPEED_OF_LIGHT, n_z=21, t_max=60.0, n_detuning13=8, lorentz_cutoff=10.0, n_snapshots=5
    )
    drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=0.3, t_start=0.0, t_end=60.0)
    probe = ProbeSpec(duration=5.0, arrival_time=12.5)
    trajectory = run_storage_protocol(material, drive, probe, grid, g2n=1.0)
    expected = eit_transmission(material, drive, grid, 1.0, trajectory.step_times, trajectory.input_series)
    assert 0.05 < expected < 0.95
    assert trajectory.efficiency == pytest.approx(expected, rel=0.03)


def test_window_transmission_needs_constant_drive(scaled_material, free_space_grid):
    drive = DriveSchedule(omega0=1.0, omega_tau=0.5, t_start=0.0, t_end=5.0)
    times = np.linspace(0.0, 1.0, 11)
    with pytest.raises(DomainError):
        eit_transmission(scaled_material, drive, free_space_grid, 1.0, times, np.ones(11))
