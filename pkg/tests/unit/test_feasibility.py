"""Unit tests for the storage conditions, presets and the feasibility report."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core import DomainError, collective_cooperativity
from src.core.constants import SPEED_OF_LIGHT, TWO_PI
from src.feasibility import (
    PRESETS,
    StoppingRegime,
    condition_entry,
    evaluate_conditions,
    feasibility_report,
    get_preset,
    nonadiabatic_bounds,
    predicted_efficiency,
    preset_names,
    render_table,
    spectral_selection,
    stopping_distance,
    storage_time_limit,
    suppression_exponent,
    suppression_factor,
    transparency_window,
    travel_distance,
)
from src.models import DriveSchedule, DriveShape, MaterialSpec, ProbeSpec, SimGrid


def test_condition_entry_margin():
    entry = condition_entry("x", "a >= b", 30.0, 3.0, 10.0)
    assert entry.margin == pytest.approx(10.0)
    assert entry.passed


def test_condition_entry_with_vanishing_rhs():
    entry = condition_entry("x", "a >= 0", 1.0, 0.0, 100.0)
    assert entry.margin is None
    assert entry.passed
    assert entry.note


def test_conditions_in_fixed_order(rare_earth, rare_earth_g2n):
    entries = evaluate_conditions(rare_earth, rare_earth_g2n, math.sqrt(1e17), 6e7)
    assert [e.name for e in entries] == [
        "power condition",
        "cooperativity dominates broadening",
        "slow entry: control above broadening",
        "slow entry: coupling above control",
    ]
    assert all(e.passed for e in entries)


def test_power_condition_boundary(rare_earth, rare_earth_g2n):
    root = math.sqrt(3.0 * rare_earth.w_product)
    above = evaluate_conditions(rare_earth, rare_earth_g2n, math.sqrt(1e17), 1.001 * root)[0]
    below = evaluate_conditions(rare_earth, rare_earth_g2n, math.sqrt(1e17), 0.999 * root)[0]
    assert above.passed
    assert not below.passed


@pytest.mark.parametrize("name", preset_names())
def test_power_condition_passes_at_equality(name):
    material = get_preset(name)
    root = math.sqrt(3.0 * material.w_product)
    entry = evaluate_conditions(material, collective_cooperativity(material), 10.0 * root, root)[0]
    assert entry.margin == pytest.approx(1.0)
    assert entry.passed


class TestConditionMonotonicity:
    """Stronger coupling never hurts; wider lines never help."""

    @settings(max_examples=100, deadline=None)
    @given(
        g2n=st.floats(min_value=1e10, max_value=1e26),
        factor=st.floats(min_value=1.0, max_value=1e6),
        omega0=st.floats(min_value=1e6, max_value=1e10),
        omega_tau=st.floats(min_value=1e5, max_value=1e9),
    )
    def test_raising_coupling_keeps_passes(self, g2n, factor, omega0, omega_tau):
        material = get_preset("rare-earth-crystal-typical")
        before = evaluate_conditions(material, g2n, omega0, omega_tau)
        after = evaluate_conditions(material, g2n * factor, omega0, omega_tau)
        for old, new in zip(before, after):
            assert new.passed or not old.passed, old.name

    @settings(max_examples=100, deadline=None)
    @given(
        g2n=st.floats(min_value=1e10, max_value=1e26),
        factor=st.floats(min_value=1.0, max_value=1e6),
        omega0=st.floats(min_value=1e6, max_value=1e10),
        omega_tau=st.floats(min_value=1e5, max_value=1e9),
    )
    def test_widening_line_keeps_failures(self, g2n, factor, omega0, omega_tau):
        material = get_preset("rare-earth-crystal-typical")
        wider = material.model_copy(update={"w13": material.w13 * factor})
        before = evaluate_conditions(material, g2n, omega0, omega_tau)
        after = evaluate_conditions(wider, g2n, omega0, omega_tau)
        for old, new in zip(before, after):
            assert old.passed or not new.passed, old.name


class TestSuppression:
    """Nonadiabatic suppression factor of a linear ramp."""

    def test_value_at_k3(self):
        assert suppression_exponent(3.0) == pytest.approx(-0.0007, abs=1e-4)
        assert suppression_factor(3.0) == pytest.approx(0.9993, abs=1e-4)

    def test_limits(self):
        assert suppression_exponent(math.inf) == 0.0
        with pytest.raises(DomainError):
            suppression_exponent(0.0)

    @settings(max_examples=100, deadline=None)
    @given(k1=st.floats(0.1, 100.0), k2=st.floats(0.1, 100.0))
    def test_increases_with_k(self, k1, k2):
        lo, hi = sorted((k1, k2))
        assert suppression_factor(lo) <= suppression_factor(hi) + 1e-12
        assert suppression_factor(hi) <= 1.0


class TestNonadiabaticBounds:
    """Shortest ramp and the medium-length bound."""

    def test_ramp_time_near_k1(self):
        material = MaterialSpec(w12=1e6, w13=1e9, gamma13=1e7)
        bounds = nonadiabatic_bounds(material, 1e22, math.sqrt(1e17), 1.0 + 1e-9, 1.0)
        assert bounds.tau_min == pytest.approx(1e-7, rel=0.1)
        assert not bounds.extrapolated
        assert bounds.bandwidth_is_normative

    def test_rejects_k_at_most_one(self, rare_earth):
        with pytest.raises(DomainError):
            nonadiabatic_bounds(rare_earth, 1e24, 1e8, 1.0, 1.0)

    def test_extrapolation_flag(self, rare_earth):
        assert nonadiabatic_bounds(rare_earth, 1e24, 1e9, 20.0, 1.0).extrapolated


class TestStoppingDistance:
    """Distance covered during the write ramp."""

    def test_worked_numbers(self):
        assert stopping_distance(math.sqrt(1e17), 1e21, 1e-6, StoppingRegime.NAIVE) == pytest.approx(
            SPEED_OF_LIGHT * 1e-6
        )
        slow = stopping_distance(math.sqrt(1e17), 1e21, 1e-6, StoppingRegime.SLOW_ENTRY)
        assert slow == pytest.approx(1e17 * SPEED_OF_LIGHT * 1e-6 / 3e21)
        assert slow < 0.05

    def test_invalid(self):
        with pytest.raises(DomainError):
            stopping_distance(1.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            stopping_distance(1.0, 0.0, 1.0)
        assert stopping_distance(1.0, math.inf, 1.0) == 0.0

    def test_travel_distance_constant_drive(self):
        drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=2.0, t_start=0.0, t_end=5.0)
        assert travel_distance(drive, 12.0) == pytest.approx(SPEED_OF_LIGHT * 0.25 * 5.0)


def test_transparency_window():
    assert transparency_window(10.0, 4.0) == pytest.approx(25.0)
    with pytest.raises(DomainError):
        transparency_window(10.0, 0.0)


def test_storage_time_limit(rare_earth):
    limits = storage_time_limit(rare_earth)
    assert limits.t_w12 == pytest.approx(1.0 / (TWO_PI * 1e4))
    assert limits.practical == min(limits.t_w12, limits.t_gamma12)
    assert math.isinf(storage_time_limit(MaterialSpec(w12=0.0, w13=0.0)).practical)


def test_predicted_efficiency_without_broadening():
    material = MaterialSpec(w12=0.0, w13=0.0, gamma12=2.0)
    drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=1.0, t_start=0.0, t_end=3.0)
    # sin^2 = 1/2 and Gamma_Psi = gamma12
    assert predicted_efficiency(drive, material, 1.0) == pytest.approx(math.exp(-2 * 0.5 * 2.0 * 3.0), rel=1e-6)


def test_predicted_efficiency_includes_suppression(rare_earth, rare_earth_g2n, worked_drive):
    with_eta = predicted_efficiency(worked_drive, rare_earth, rare_earth_g2n)
    without = predicted_efficiency(worked_drive, rare_earth, rare_earth_g2n, include_suppression=False)
    assert with_eta == pytest.approx(without * suppression_factor(3.0))


def test_spectral_selection(rare_earth, rare_earth_g2n):
    selected = spectral_selection(rare_earth, 10.0)
    assert selected.w13 == pytest.approx(rare_earth.w13 / 10)
    assert selected.w12 == rare_earth.w12
    assert collective_cooperativity(selected) == pytest.approx(rare_earth_g2n / 10)
    assert transparency_window(1e8, selected.w13) == pytest.approx(10 * transparency_window(1e8, rare_earth.w13))
    with pytest.raises(DomainError):
        spectral_selection(rare_earth, 0.5)


def test_presets():
    assert preset_names() == sorted(PRESETS)
    assert "rare-earth-crystal-typical" in preset_names()
    for name in preset_names():
        material = get_preset(name)
        assert material.name == name
        assert material.provenance
    with pytest.raises(DomainError):
        get_preset("unobtainium")


class TestFeasibilityReport:
    """End-to-end evaluation of a material and protocol."""

    def test_rare_earth_worked_example_passes(self, rare_earth, rare_earth_g2n, worked_drive, worked_probe):
        report = feasibility_report(rare_earth, rare_earth_g2n, worked_drive, worked_probe)
        assert report.verdict
        assert report.failed == []
        assert report.derived.intensity0 == pytest.approx(1.476e6, rel=1e-3)
        assert report.derived.field_ratio_k == pytest.approx(3.0)
        assert report.derived.eta == pytest.approx(suppression_factor(3.0))
        assert report.derived.predicted_efficiency is not None
        assert report.g2n == pytest.approx(1.664e24, rel=1e-3)

    def test_broad_fiber_fails(self):
        fiber = get_preset("doped-fiber-indicative")
        broad = MaterialSpec(**{**fiber.model_dump(), "w12": fiber.w12 * 1e3, "w13": fiber.w13 * 1e3})
        g2n = collective_cooperativity(broad)
        drive = DriveSchedule(omega0=math.sqrt(1e17), omega_tau=0.0, t_start=0.0, t_end=1e-5)
        report = feasibility_report(broad, g2n, drive, ProbeSpec(duration=1e-6))
        assert not report.verdict
        assert "cooperativity dominates broadening" in report.failed
        assert "power condition" in report.failed
        assert report.derived.predicted_efficiency is None
        assert any("control field reaches zero" in flag for flag in report.flags)

    def test_short_medium_fails(self, rare_earth, rare_earth_g2n, worked_drive, worked_probe):
        grid = SimGrid.from_courant(z_max=1e-6, n_z=2, t_max=1e-5)
        report = feasibility_report(rare_earth, rare_earth_g2n, worked_drive, worked_probe, grid)
        assert report.failed == ["medium holds stopped pulse"]

    def test_gas_limit_has_no_window(self, gas_material, worked_probe):
        drive = DriveSchedule(omega0=1e8, omega_tau=1e7, t_start=0.0, t_end=1e-5)
        report = feasibility_report(gas_material, 1e20, drive, worked_probe)
        assert report.derived.gamma_eit is None
        assert any("transparency window" in flag for flag in report.flags)

    def test_serialisation(self, rare_earth, rare_earth_g2n, worked_drive, worked_probe):
        report = feasibility_report(rare_earth, rare_earth_g2n, worked_drive, worked_probe)
        document = json.loads(report.to_json())
        assert document["verdict"] is True
        assert document["schema_version"] == "1.0"
        assert len(document["conditions"]) == len(report.conditions)
        table = render_table(report)
        assert "Verdict: PASS" in table
        assert "power condition" in table
