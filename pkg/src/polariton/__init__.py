"""Reduced dark-state polariton model."""

from src.polariton.kinematics import (
    BrightStateForm,
    CoefficientSet,
    CscTermConvention,
    MixingAngle,
    alpha_coefficient,
    beta_coefficient,
    bright_state_amplitude,
    dispersion_correction,
    effective_group_velocity,
    gamma_psi,
    inverse_polariton_transform,
    min_group_velocity,
    mixing_angle,
    mixing_angle_rate,
    nonadiabatic_coefficients,
    polariton_transform,
    power_condition_margin,
    stored_fraction_at_minimum,
    velocity_correction,
)
from src.polariton.reduced import (
    LossIntegrals,
    PolaritonField,
    ReducedMethod,
    ReducedModel,
    TransportCoefficients,
    evolve_reduced,
    loss_integrals,
    storage_loss_exponent,
    transport_coefficients,
)

__all__ = [
    "BrightStateForm",
    "CoefficientSet",
    "CscTermConvention",
    "LossIntegrals",
    "MixingAngle",
    "PolaritonField",
    "ReducedMethod",
    "ReducedModel",
    "TransportCoefficients",
    "alpha_coefficient",
    "beta_coefficient",
    "bright_state_amplitude",
    "dispersion_correction",
    "effective_group_velocity",
    "evolve_reduced",
    "gamma_psi",
    "inverse_polariton_transform",
    "loss_integrals",
    "min_group_velocity",
    "mixing_angle",
    "mixing_angle_rate",
    "nonadiabatic_coefficients",
    "polariton_transform",
    "power_condition_margin",
    "storage_loss_exponent",
    "stored_fraction_at_minimum",
    "transport_coefficients",
    "velocity_correction",
]
