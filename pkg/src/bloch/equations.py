"""Optical Bloch equations of a Lambda system, vectorised over cells and detuning classes."""

from dataclasses import dataclass
from typing import Union

import numpy as np

from src.ensemble.lorentzian import DetuningGrid
from src.models.specs import MaterialSpec

# component order of the density-matrix array
S11, S22, S33, S12, S13, S23 = range(6)
N_COMPONENTS = 6

Field = Union[complex, np.ndarray]


@dataclass(frozen=True)
class ClassCoefficients:
    """Complex decay-plus-detuning coefficients -i*Delta_ij - gamma_ij per class."""

    g12: np.ndarray
    g13: np.ndarray
    g23: np.ndarray

    @classmethod
    def from_detunings(
        cls,
        delta12: np.ndarray,
        delta13: np.ndarray,
        material: MaterialSpec,
        probe_detuning: float = 0.0,
        control_detuning: float = 0.0,
    ) -> "ClassCoefficients":
        """
        Assemble the coefficients from line-centre offsets of each class.

        The 2-3 offset follows from the other two: delta23 = delta13 - delta12.
        """
        delta12 = np.asarray(delta12, dtype=float)
        delta13 = np.asarray(delta13, dtype=float)
        delta23 = delta13 - delta12
        return cls(
            g12=-1j * (probe_detuning - control_detuning + delta12) - material.gamma12,
            g13=-1j * (probe_detuning + delta13) - material.gamma13,
            g23=-1j * (control_detuning + delta23) - material.gamma23,
        )

    @classmethod
    def for_grid(
        cls,
        grid: DetuningGrid,
        material: MaterialSpec,
        probe_detuning: float = 0.0,
        control_detuning: float = 0.0,
    ) -> "ClassCoefficients":
        return cls.from_detunings(grid.delta12, grid.delta13, material, probe_detuning, control_detuning)


def ground_state(n_z: int, n_classes: int) -> np.ndarray:
    """All atoms in |1>, no coherences."""
    rho = np.zeros((N_COMPONENTS, n_z, n_classes), dtype=complex)
    rho[S11] = 1.0
    return rho


def atom_derivatives(
    rho: np.ndarray,
    ge: Field,
    omega: Field,
    coeffs: ClassCoefficients,
    material: MaterialSpec,
) -> np.ndarray:
    """
    Right-hand side of the six independent density-matrix equations.

    sigma21, sigma31 and sigma32 enter through complex conjugates, so the
    Hermitian partners are never integrated separately. Noise terms are omitted.

    Args:
        rho: Array (6, ...) ordered S11, S22, S33, S12, S13, S23
        ge: Probe Rabi frequency g*E, broadcastable against rho[0]
        omega: Control Rabi frequency
        coeffs: Per-class coefficients, broadcastable against rho[0]
        material: Supplies the population decay rates

    Returns:
        d(rho)/dt with the same shape as rho
    """
    s11, s22, s33, s12, s13, s23 = rho
    ge_c = np.conj(ge)
    om_c = np.conj(omega)
    s13_c = np.conj(s13)
    s23_c = np.conj(s23)

    probe_flow = 1j * (ge_c * s13 - ge * s13_c)
    control_flow = 1j * (om_c * s23 - omega * s23_c)

    out = np.empty_like(rho)
    out[S11] = -material.gamma1 * s11 + probe_flow
    out[S22] = -material.gamma2 * s22 + control_flow
    out[S33] = -material.gamma3 * s33 - probe_flow - control_flow
    out[S13] = coeffs.g13 * s13 + 1j * (ge * (s11 - s33) + omega * s12)
    out[S23] = coeffs.g23 * s23 + 1j * (np.conj(s12) * ge + omega * (s22 - s33))
    out[S12] = coeffs.g12 * s12 + 1j * (om_c * s13 - ge * s23_c)
    return out


def rk4_atoms(
    rho: np.ndarray,
    ge: Field,
    omega_stages: tuple,
    coeffs: ClassCoefficients,
    material: MaterialSpec,
    dt: float,
) -> np.ndarray:
    """One classical Runge-Kutta step with the probe held fixed."""
    om0, om_half, om1 = omega_stages
    k1 = atom_derivatives(rho, ge, om0, coeffs, material)
    k2 = atom_derivatives(rho + 0.5 * dt * k1, ge, om_half, coeffs, material)
    k3 = atom_derivatives(rho + 0.5 * dt * k2, ge, om_half, coeffs, material)
    k4 = atom_derivatives(rho + dt * k3, ge, om1, coeffs, material)
    return rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
