"""Report models for feasibility evaluations."""

import math
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return value


class ConditionEntry(BaseModel):
    """One inequality of the storage scheme, evaluated."""

    name: str = Field(description="Short condition name")
    formula_id: str = Field(description="Stable identifier of the inequality")
    lhs: Optional[float] = Field(description="Left-hand side value")
    rhs: Optional[float] = Field(description="Right-hand side value")
    margin: Optional[float] = Field(description="lhs/rhs; null when the right side vanishes")
    threshold: float = Field(description="Margin at or above which the condition passes")
    passed: bool = Field(description="Whether the condition holds")
    required: bool = Field(default=True, description="Whether the verdict depends on it")
    note: Optional[str] = Field(default=None, description="Context for the reader")

    @field_validator("lhs", "rhs", "margin")
    @classmethod
    def drop_non_finite(cls, v: Optional[float]) -> Optional[float]:
        return _finite_or_none(v)


class DerivedQuantities(BaseModel):
    """Design numbers that follow from the material and the protocol."""

    v_g_min: float = Field(description="Slowest polariton speed (m/s)")
    residual_stored_fraction: Optional[float] = Field(description="sin(theta) at the slowest speed")
    gamma_eit: Optional[float] = Field(description="Transparency window at omega0 (rad/s)")
    field_ratio_k: Optional[float] = Field(description="omega_tau / sqrt(W12 W13)")
    eta: Optional[float] = Field(description="Nonadiabatic suppression factor")
    intensity0: Optional[float] = Field(description="Control intensity at omega0 (W/m^2)")
    intensity_tau: Optional[float] = Field(description="Control intensity at omega_tau (W/m^2)")
    z_stop_naive: float = Field(description="c * tau (m)")
    z_stop_slow_entry: float = Field(description="omega0^2 c tau / (3 g^2 N) (m)")
    travel_distance: float = Field(description="Integral of c cos^2(theta) over the write ramp (m)")
    tau_min: Optional[float] = Field(description="Shortest ramp keeping nonadiabatic losses small (s)")
    printed_length_bound: Optional[float] = Field(description="g^2 N / (gamma13 Lp^2), dimensionally inconsistent")
    storage_time_w12: Optional[float] = Field(description="1/W12 (s)")
    storage_time_gamma12: Optional[float] = Field(description="1/gamma12 (s)")
    predicted_efficiency: Optional[float] = Field(description="exp(-2 int sin^2 Gamma_Psi) * eta over the drive")

    @field_validator("*")
    @classmethod
    def drop_non_finite(cls, v):
        if isinstance(v, float):
            return _finite_or_none(v)
        return v


class FeasibilityReport(BaseModel):
    """Go/no-go evaluation of a material and storage protocol."""

    schema_version: str = Field(description="Output schema version")
    material: str = Field(description="Material name")
    provenance: str = Field(description="Origin of the material numbers")
    g2n: float = Field(description="Collective coupling ((rad/s)^2)")
    omega0: float = Field(description="Initial control Rabi frequency (rad/s)")
    omega_tau: float = Field(description="Control Rabi frequency after the write ramp (rad/s)")
    ramp_duration: float = Field(description="Write ramp duration tau (s)")
    conditions: List[ConditionEntry] = Field(description="Required and optional conditions")
    informational: List[ConditionEntry] = Field(default_factory=list, description="Entries outside the verdict")
    derived: DerivedQuantities
    flags: List[str] = Field(default_factory=list, description="Warnings raised while evaluating")
    verdict: bool = Field(description="AND of the required conditions")

    @property
    def failed(self) -> List[str]:
        """Names of required conditions that do not hold."""
        return [c.name for c in self.conditions if c.required and not c.passed]

    def to_json(self) -> str:
        """Serialize with keys in declaration order."""
        return self.model_dump_json(indent=2)
