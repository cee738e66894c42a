"""Units, physical constants, errors and scalar coupling relations."""

from src.core.constants import (
    EPSILON_0,
    HBAR,
    SPEED_OF_LIGHT,
    hz_to_rad_s,
    optical_angular_frequency,
    rad_s_to_hz,
)
from src.core.coupling import (
    atom_number,
    collective_cooperativity,
    coupling_constant,
    coupling_from_cooperativity,
    intensity_to_rabi,
    rabi_to_intensity,
)
from src.core.errors import (
    ConfigError,
    ConfigFileNotFoundError,
    ConfigSyntaxError,
    ConfigUnknownKeyError,
    ConfigValidationError,
    DomainError,
    NumericalInstabilityError,
    PolaritonError,
    SingularInputError,
)

__all__ = [
    "SPEED_OF_LIGHT",
    "HBAR",
    "EPSILON_0",
    "hz_to_rad_s",
    "rad_s_to_hz",
    "optical_angular_frequency",
    "coupling_constant",
    "collective_cooperativity",
    "rabi_to_intensity",
    "intensity_to_rabi",
    "atom_number",
    "coupling_from_cooperativity",
    "PolaritonError",
    "DomainError",
    "SingularInputError",
    "NumericalInstabilityError",
    "ConfigError",
    "ConfigFileNotFoundError",
    "ConfigSyntaxError",
    "ConfigUnknownKeyError",
    "ConfigValidationError",
]
