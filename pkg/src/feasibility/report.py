"""Aggregate every storage condition into one feasibility report."""

from typing import List, Optional

import pandas as pd
from loguru import logger

from config import settings
from src.core.coupling import rabi_to_intensity
from src.core.errors import DomainError, SingularInputError
from src.feasibility.conditions import (
    StoppingRegime,
    bandwidth_check,
    condition_entry,
    evaluate_conditions,
    nonadiabatic_bounds,
    predicted_efficiency,
    stopping_distance,
    storage_time_limit,
    suppression_factor,
    transparency_window,
    travel_distance,
)
from src.models.reports import ConditionEntry, DerivedQuantities, FeasibilityReport
from src.models.specs import DriveSchedule, MaterialSpec, ProbeSpec, SimGrid
from src.polariton.kinematics import effective_group_velocity, min_group_velocity, stored_fraction_at_minimum
from src.polariton.reduced import loss_integrals


def feasibility_report(
    material: MaterialSpec,
    g2n: float,
    drive: DriveSchedule,
    probe: ProbeSpec,
    grid: Optional[SimGrid] = None,
) -> FeasibilityReport:
    """
    Evaluate a material and storage protocol.

    Args:
        material: Medium
        g2n: Collective coupling ((rad/s)^2)
        drive: Write ramp (and optional hold and read ramp)
        probe: Input pulse; its duration sets the spectral width
        grid: Optional simulation grid; its length is checked against the stopping distance

    Returns:
        FeasibilityReport whose verdict is the AND of the required conditions
    """
    flags: List[str] = []
    omega0, omega_tau, tau = drive.omega0, drive.omega_tau, drive.ramp_duration
    wp = material.w_product
    conditions = evaluate_conditions(material, g2n, omega0, omega_tau)

    # bandwidth form of the medium-length condition
    gamma_eit: Optional[float] = None
    if material.w13 > 0:
        gamma_eit = transparency_window(omega0, material.w13)
        conditions.append(bandwidth_check(probe.duration, gamma_eit))
    else:
        flags.append("no optical inhomogeneity: transparency window not defined by W13")

    k = drive.field_ratio_k(wp)
    eta: Optional[float] = None
    tau_min: Optional[float] = None
    printed_bound: Optional[float] = None
    pulse_length = float(effective_group_velocity(omega0, material, g2n)) * probe.duration
    informational: List[ConditionEntry] = []
    if wp == 0:
        conditions.append(
            condition_entry(
                "ramp adiabaticity",
                "tau >> tau_min",
                tau,
                0.0,
                settings.much_greater_ratio,
                note="no inhomogeneous broadening; no nonadiabatic loss bound",
            )
        )
    elif k <= 1:
        message = f"field ratio k = {k:.3g} is not above 1; ramp-time bound undefined"
        flags.append(message)
        logger.warning(message)
        conditions.append(
            ConditionEntry(
                name="ramp adiabaticity",
                formula_id="tau >> tau_min",
                lhs=tau,
                rhs=None,
                margin=None,
                threshold=settings.much_greater_ratio,
                passed=False,
                note=message,
            )
        )
        if k > 0:
            eta = suppression_factor(k)
    else:
        bounds = nonadiabatic_bounds(material, g2n, omega0, k, pulse_length)
        if bounds.extrapolated:
            flags.append(f"k = {k:.3g} above 10: ramp-time bound extrapolated")
        tau_min = bounds.tau_min
        printed_bound = bounds.printed_length_bound
        eta = suppression_factor(k)
        conditions.append(
            condition_entry("ramp adiabaticity", "tau >> tau_min", tau, tau_min, settings.much_greater_ratio)
        )
        informational.append(
            ConditionEntry(
                name="printed medium-length bound",
                formula_id="z << g2N / (gamma13 Lp^2)",
                lhs=grid.length if grid is not None else None,
                rhs=printed_bound,
                margin=None,
                threshold=settings.much_greater_ratio,
                passed=True,
                required=False,
                note="mixes length and rate units; the bandwidth check is normative",
            )
        )

    z_naive = stopping_distance(omega0, g2n, tau, StoppingRegime.NAIVE)
    z_slow = stopping_distance(omega0, g2n, tau, StoppingRegime.SLOW_ENTRY)
    if grid is not None:
        conditions.append(condition_entry("medium holds stopped pulse", "length >= z_stop", grid.length, z_slow, 1.0))

    limits = storage_time_limit(material)
    informational.append(
        condition_entry(
            "storage within inhomogeneous lifetime",
            "tau + hold <= 1/W12",
            limits.t_w12,
            tau + drive.hold_duration,
            1.0,
            required=False,
        )
    )

    efficiency: Optional[float] = None
    losses = None
    try:
        efficiency = predicted_efficiency(drive, material, g2n)
        wave_number = 1.0 / pulse_length if pulse_length > 0 else 0.0
        losses = loss_integrals(drive, material, g2n, wave_number)
    except SingularInputError:
        flags.append("control field reaches zero: reduced-model losses not evaluated")
    if losses is not None:
        limit = losses.threshold
        informational.extend(
            [
                _info("integrated loss", "int A dt << 1", losses.integral_a, limit),
                _info("integrated diffusion", "k^2 c^2 int C dt << 1", losses.integral_diffusion, limit),
                _info(
                    "diffusion upper bound",
                    "k^2 c^2 gamma13 int sin^4 cos^2 / g2N << 1",
                    losses.diffusion_upper_bound,
                    limit,
                ),
            ]
        )

    try:
        intensity0 = rabi_to_intensity(omega0, material.d13)
        intensity_tau = rabi_to_intensity(omega_tau, material.d13)
    except DomainError as exc:
        flags.append(str(exc))
        intensity0 = intensity_tau = None

    residual: Optional[float] = None
    try:
        residual = stored_fraction_at_minimum(material, g2n)
    except (DomainError, SingularInputError) as exc:
        flags.append(str(exc))

    derived = DerivedQuantities(
        v_g_min=min_group_velocity(material, g2n),
        residual_stored_fraction=residual,
        gamma_eit=gamma_eit,
        field_ratio_k=k,
        eta=eta,
        intensity0=intensity0,
        intensity_tau=intensity_tau,
        z_stop_naive=z_naive,
        z_stop_slow_entry=z_slow,
        travel_distance=travel_distance(drive, g2n),
        tau_min=tau_min,
        printed_length_bound=printed_bound,
        storage_time_w12=limits.t_w12,
        storage_time_gamma12=limits.t_gamma12,
        predicted_efficiency=efficiency,
    )
    verdict = all(c.passed for c in conditions if c.required)
    report = FeasibilityReport(
        schema_version=settings.schema_version,
        material=material.name,
        provenance=material.provenance,
        g2n=g2n,
        omega0=omega0,
        omega_tau=omega_tau,
        ramp_duration=tau,
        conditions=conditions,
        informational=informational,
        derived=derived,
        flags=flags,
        verdict=verdict,
    )
    if verdict:
        logger.success(f"{material.name}: all required conditions hold")
    else:
        logger.warning(f"{material.name}: failing conditions {report.failed}")
    return report


def _info(name: str, formula_id: str, value: float, limit: float) -> ConditionEntry:
    return ConditionEntry(
        name=name,
        formula_id=formula_id,
        lhs=value,
        rhs=limit,
        margin=limit / abs(value) if value != 0 else None,
        threshold=1.0,
        passed=abs(value) <= limit,
        required=False,
    )


def render_table(report: FeasibilityReport) -> str:
    """Plain-text table of conditions and derived quantities."""
    rows = [
        {
            "condition": c.name,
            "formula": c.formula_id,
            "lhs": c.lhs,
            "rhs": c.rhs,
            "margin": c.margin,
            "status": ("PASS" if c.passed else "FAIL") + ("" if c.required else " (info)"),
        }
        for c in report.conditions + report.informational
    ]
    conditions = pd.DataFrame(rows).to_string(index=False, float_format=lambda v: f"{v:.3e}")
    derived = pd.Series(report.derived.model_dump()).to_string(float_format=lambda v: f"{v:.3e}")
    verdict = "PASS" if report.verdict else "FAIL"
    lines = [
        f"Material: {report.material}",
        f"Provenance: {report.provenance}",
        "",
        conditions,
        "",
        derived,
        "",
        f"Verdict: {verdict}",
    ]
    lines.extend(f"! {flag}" for flag in report.flags)
    return "\n".join(lines)

