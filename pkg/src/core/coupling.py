"""Scalar coupling relations between material parameters, fields and intensities."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

from src.core.constants import EPSILON_0, HBAR, SPEED_OF_LIGHT, optical_angular_frequency
from src.core.errors import DomainError

if TYPE_CHECKING:
    from src.models.specs import MaterialSpec


def coupling_constant(material: MaterialSpec, volume: float) -> float:
    """
    Single-atom vacuum coupling g = d13 * sqrt(nu / (2 hbar eps0 V)).

    nu is the angular optical frequency 2*pi*c/lambda.

    Args:
        material: Medium parameters (uses d13 and wavelength)
        volume: Interaction volume (m^3)

    Returns:
        g in rad/s
    """
    if volume <= 0:
        raise DomainError(f"interaction volume must be positive, got {volume}")
    nu = optical_angular_frequency(material.wavelength)
    return material.d13 * math.sqrt(nu / (2.0 * HBAR * EPSILON_0 * volume))


def collective_cooperativity(material: MaterialSpec) -> float:
    """
    Collective coupling g^2 N in (rad/s)^2.

    The interaction volume cancels, leaving density * d13^2 * nu / (2 hbar eps0).
    """
    nu = optical_angular_frequency(material.wavelength)
    return material.density * material.d13**2 * nu / (2.0 * HBAR * EPSILON_0)


def rabi_to_intensity(omega: float, d13: float) -> float:
    """
    Intensity (W/m^2) of a control beam with Rabi frequency omega.

    I = omega^2 hbar^2 c eps0 / (2 d13^2)
    """
    if d13 <= 0:
        raise DomainError("dipole moment must be positive to convert a Rabi frequency to intensity")
    return omega**2 * HBAR**2 * SPEED_OF_LIGHT * EPSILON_0 / (2.0 * d13**2)


def intensity_to_rabi(intensity: float, d13: float) -> float:
    """Inverse of rabi_to_intensity; returns a non-negative Rabi frequency (rad/s)."""
    if d13 <= 0:
        raise DomainError("dipole moment must be positive to convert an intensity to a Rabi frequency")
    if intensity < 0:
        raise DomainError(f"intensity must be non-negative, got {intensity}")
    return math.sqrt(2.0 * d13**2 * intensity / (HBAR**2 * SPEED_OF_LIGHT * EPSILON_0))


def atom_number(material: MaterialSpec, volume: float) -> float:
    """Number of dopant atoms N in the interaction volume."""
    if volume <= 0:
        raise DomainError(f"interaction volume must be positive, got {volume}")
    return material.density * volume


def coupling_from_cooperativity(g2n: float, n_atoms: float) -> float:
    """
    Single-atom coupling g consistent with a given g^2 N.

    Equals coupling_constant(material, V) when g2n is the material's own
    collective_cooperativity and n_atoms = density * V.
    """
    if n_atoms <= 0:
        raise DomainError(f"atom number must be positive, got {n_atoms}")
    if g2n < 0:
        raise DomainError(f"g2N must be non-negative, got {g2n}")
    return math.sqrt(g2n / n_atoms)
