"""
Storage conditions and closed-form design quantities.

All functions are pure and accept scalars in SI units (rates in rad/s).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np
from loguru import logger
from scipy.integrate import trapezoid

from config import settings
from src.core.constants import SPEED_OF_LIGHT
from src.core.errors import DomainError
from src.models.reports import ConditionEntry
from src.models.specs import DriveSchedule, MaterialSpec
from src.polariton.reduced import storage_loss_exponent

# margins within this relative distance below a threshold still pass
MARGIN_RTOL = 1e-9


def condition_entry(
    name: str,
    formula_id: str,
    lhs: float,
    rhs: float,
    threshold: float,
    required: bool = True,
    note: Optional[str] = None,
) -> ConditionEntry:
    if rhs == 0:
        margin = None
        passed = lhs >= 0
        note = note or "right-hand side vanishes; trivially satisfied"
    else:
        margin = lhs / rhs
        passed = margin >= threshold * (1.0 - MARGIN_RTOL)
    return ConditionEntry(
        name=name,
        formula_id=formula_id,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        threshold=threshold,
        passed=passed,
        required=required,
        note=note,
    )


def evaluate_conditions(
    material: MaterialSpec, g2n: float, omega0: float, omega_tau: float
) -> List[ConditionEntry]:
    """
    Check the power condition, the cooperativity condition and the slow-entry regime.

    "Much greater" uses settings.much_greater_ratio; "at least of order" uses 1.
    The slow-entry regime asks for a factor of ten on each side.

    Args:
        material: Medium (supplies W12 W13)
        g2n: Collective coupling ((rad/s)^2)
        omega0: Control Rabi frequency before the ramp (rad/s)
        omega_tau: Control Rabi frequency after the ramp (rad/s)

    Returns:
        Condition entries in a fixed order
    """
    wp = material.w_product
    entries = [
        condition_entry(
            "power condition",
            "omega_tau^2 >= 3 W12 W13",
            omega_tau**2,
            3.0 * wp,
            1.0,
        ),
        condition_entry(
            "cooperativity dominates broadening",
            "g2N >> W12 W13",
            g2n,
            wp,
            settings.much_greater_ratio,
        ),
        condition_entry(
            "slow entry: control above broadening",
            "W12 W13 <= omega0^2 / 10",
            omega0**2,
            wp,
            10.0,
        ),
        condition_entry(
            "slow entry: coupling above control",
            "omega0^2 <= g2N / 10",
            g2n,
            omega0**2,
            10.0,
        ),
    ]
    for entry in entries:
        if not entry.passed:
            logger.warning(f"{material.name}: condition '{entry.name}' fails (margin {entry.margin})")
    return entries


def transparency_window(omega: float, w13: float) -> float:
    """EIT window omega^2 / W13 (rad/s) of an inhomogeneously broadened line."""
    if w13 <= 0:
        raise DomainError(f"w13 must be positive for a transparency window, got {w13}")
    return omega**2 / w13


def bandwidth_check(probe_duration: float, window: float) -> ConditionEntry:
    """The pulse's spectral width 1/duration must fit inside the window."""
    if probe_duration <= 0:
        raise DomainError(f"probe duration must be positive, got {probe_duration}")
    return condition_entry(
        "pulse fits transparency window",
        "1/duration <= omega0^2 / W13",
        window,
        1.0 / probe_duration,
        1.0,
    )


def suppression_exponent(field_ratio_k: float) -> float:
    """Exponent of the nonadiabatic suppression factor."""
    if field_ratio_k <= 0:
        raise DomainError(f"field ratio k must be positive, got {field_ratio_k}")
    if math.isinf(field_ratio_k):
        return 0.0
    k2 = field_ratio_k**2
    return (3.0 + 2.0 * k2) / (1.0 + k2) ** 2 + 2.0 * math.log(k2 / (1.0 + k2))


def suppression_factor(field_ratio_k: float) -> float:
    """Fraction eta of the pulse surviving a linear ramp down to k sqrt(W12 W13)."""
    return math.exp(suppression_exponent(field_ratio_k))


@dataclass(frozen=True)
class NonadiabaticBounds:
    """Limits on the ramp duration and the medium length."""

    tau_min: float
    printed_length_bound: float
    bandwidth_is_normative: bool
    dimensionally_consistent: bool
    extrapolated: bool


def nonadiabatic_bounds(
    material: MaterialSpec,
    g2n: float,
    omega0: float,
    field_ratio_k: float,
    pulse_length: float,
) -> NonadiabaticBounds:
    """
    Shortest linear ramp and the printed medium-length bound.

    tau_min = gamma13 omega0 / (k^7 (W12 W13)^(3/2)). The length bound
    g2N/(gamma13 Lp^2) is reported verbatim; the bandwidth check is what
    decides feasibility.

    Raises:
        DomainError: k <= 1, non-positive pulse length or zero broadening
    """
    if field_ratio_k <= 1:
        raise DomainError(f"field ratio k must exceed 1, got {field_ratio_k:.3g}")
    if pulse_length <= 0:
        raise DomainError(f"pulse length must be positive, got {pulse_length}")
    wp = material.w_product
    if wp <= 0:
        raise DomainError("the ramp-time bound needs W12 W13 > 0")
    extrapolated = field_ratio_k > 10
    if extrapolated:
        logger.warning(f"k = {field_ratio_k:.3g} lies above 10; the ramp-time bound is extrapolated")
    tau_min = material.gamma13 * omega0 / (field_ratio_k**7 * wp**1.5)
    printed = g2n / (material.gamma13 * pulse_length**2) if material.gamma13 > 0 else math.inf
    return NonadiabaticBounds(
        tau_min=tau_min,
        printed_length_bound=printed,
        bandwidth_is_normative=True,
        dimensionally_consistent=False,
        extrapolated=extrapolated,
    )


class StoppingRegime(Enum):
    """How the stopping distance is estimated."""

    NAIVE = "naive"
    SLOW_ENTRY = "slow-entry"


def stopping_distance(
    omega0: float, g2n: float, tau: float, regime: StoppingRegime = StoppingRegime.SLOW_ENTRY
) -> float:
    """
    Distance the pulse covers while the control is ramped down (m).

    The naive estimate is c*tau; a pulse already slowed on entry covers
    omega0^2 c tau / (3 g^2 N).
    """
    if tau <= 0:
        raise DomainError(f"ramp duration must be positive, got {tau}")
    if regime == StoppingRegime.NAIVE:
        return SPEED_OF_LIGHT * tau
    if math.isinf(g2n):
        return 0.0
    if g2n <= 0:
        raise DomainError(f"g2N must be positive, got {g2n}")
    return omega0**2 * SPEED_OF_LIGHT * tau / (3.0 * g2n)


def travel_distance(
    drive: DriveSchedule,
    g2n: float,
    t0: Optional[float] = None,
    t1: Optional[float] = None,
    n_samples: int = 4001,
) -> float:
    """Integral of c cos^2(theta) over the drive window, the write ramp by default (m)."""
    t0 = drive.t_start if t0 is None else t0
    t1 = drive.t_end if t1 is None else t1
    times = np.linspace(t0, t1, n_samples)
    om2 = drive.omega(times) ** 2
    return float(SPEED_OF_LIGHT * trapezoid(om2 / (om2 + g2n), times))


@dataclass(frozen=True)
class StorageTimeLimit:
    """Storage time set by spin inhomogeneity and by spin dephasing."""

    t_w12: float
    t_gamma12: float

    @property
    def practical(self) -> float:
        return min(self.t_w12, self.t_gamma12)


def storage_time_limit(material: MaterialSpec) -> StorageTimeLimit:
    """1/W12 and 1/gamma12 (infinite when the rate is zero)."""
    t_w = 1.0 / material.w12 if material.w12 > 0 else math.inf
    t_g = 1.0 / material.gamma12 if material.gamma12 > 0 else math.inf
    return StorageTimeLimit(t_w12=t_w, t_gamma12=t_g)


def predicted_efficiency(
    drive: DriveSchedule,
    material: MaterialSpec,
    g2n: float,
    t0: Optional[float] = None,
    t1: Optional[float] = None,
    include_suppression: bool = True,
) -> float:
    """
    Reduced-model retrieval efficiency exp(-2 int sin^2(theta) Gamma_Psi dt) * eta(k).

    Integrates over the whole schedule by default.
    """
    t0 = drive.t_start if t0 is None else t0
    t1 = drive.total_duration if t1 is None else t1
    exponent = storage_loss_exponent(drive, material, g2n, t0, t1)
    efficiency = math.exp(-2.0 * exponent)
    if include_suppression and material.w_product > 0:
        efficiency *= suppression_factor(drive.field_ratio_k(material.w_product))
    return efficiency


def spectral_selection(material: MaterialSpec, factor: float) -> MaterialSpec:
    """
    Narrow the optical line by `factor` at the cost of the same loss in density.

    Models selecting a spectral sub-ensemble; W12 and the decay rates stay put.
    """
    if factor < 1:
        raise DomainError(f"selection factor must be at least 1, got {factor}")
    fields = material.model_dump()
    fields.update(
        name=f"{material.name}-selected-{factor:g}",
        w13=material.w13 / factor,
        density=material.density / factor,
        provenance=f"{material.provenance}; spectral selection by {factor:g}",
    )
    return MaterialSpec(**fields)
