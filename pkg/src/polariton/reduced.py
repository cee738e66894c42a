"""
Reduced dark-polariton transport.

Solves dPsi/dt = -v(t) dPsi/dz - A(t) Psi + c^2 C(t) d2Psi/dz2 either exactly
per Fourier mode or by finite differences on the same periodic grid.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.integrate import cumulative_trapezoid, trapezoid

from config import settings
from src.core.constants import SPEED_OF_LIGHT
from src.core.errors import DomainError, SingularInputError
from src.models.specs import DriveSchedule, MaterialSpec, SimGrid
from src.polariton.kinematics import (
    CscTermConvention,
    alpha_coefficient,
    beta_coefficient,
    effective_group_velocity,
    gamma_psi,
    inverse_polariton_transform,
    mixing_angle,
    mixing_angle_rate,
    nonadiabatic_coefficients,
    power_condition_margin,
    velocity_correction,
)


class ReducedMethod(Enum):
    """Solvers for the reduced equation of motion."""

    FOURIER = "fourier"
    DIRECT = "direct"


class ReducedModel(Enum):
    """Which coefficients drive the reduced equation."""

    NONADIABATIC = "nonadiabatic"
    ADIABATIC = "adiabatic"


@dataclass
class TransportCoefficients:
    """Velocity, loss and diffusion sampled on a time grid."""

    times: np.ndarray
    omega: np.ndarray
    theta: np.ndarray
    velocity: np.ndarray
    loss: np.ndarray
    diffusion: np.ndarray


@dataclass
class PolaritonField:
    """Snapshots of the dark and bright polariton along a reduced run."""

    z: np.ndarray
    times: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    omega: np.ndarray
    norms: np.ndarray
    method: ReducedMethod
    model: ReducedModel
    n_atoms: float
    flags: List[str] = field(default_factory=list)

    @property
    def efficiency(self) -> float:
        """Final over initial dark-polariton energy."""
        if self.norms[0] == 0:
            return 0.0
        return float((self.norms[-1] / self.norms[0]) ** 2)

    def electric_field(self) -> np.ndarray:
        """Probe envelope rebuilt from (Psi, Phi) at each snapshot."""
        e, _ = inverse_polariton_transform(self.psi, self.phi, self.n_atoms, self.theta[:, None])
        return e

    def spin_coherence(self) -> np.ndarray:
        """Ensemble-averaged spin coherence at each snapshot."""
        _, spin = inverse_polariton_transform(self.psi, self.phi, self.n_atoms, self.theta[:, None])
        return spin


def transport_coefficients(
    times: np.ndarray,
    drive: DriveSchedule,
    material: MaterialSpec,
    g2n: float,
    model: ReducedModel = ReducedModel.NONADIABATIC,
    csc_term: CscTermConvention = CscTermConvention.PRINTED,
) -> TransportCoefficients:
    """
    Evaluate v(t), A(t) and C(t) of the reduced equation at the given times.

    The nonadiabatic velocity is

        v = c cos^2(theta) / (1 - gC) - c B,
        B = -2 gC cos^2(theta) - beta Gamma_Psi sin^2(theta) cos^2(theta)
            + theta_dot sin(theta) cos(theta) (alpha + beta (1 + cot^2 - dC - gC cot^2)).

    The first term is the adiabatic group velocity, already renormalised by
    1 / (1 - gC). The -2 gC cos^2 term inside B is the first-order correction
    from expanding the polariton time derivative; it is not a second
    application of that renormalisation.

    Raises:
        SingularInputError: The control field vanishes at one of the times
    """
    omega = np.asarray(drive.omega(times), dtype=float)
    if np.any(omega <= 0):
        bad = float(times[np.argmax(omega <= 0)])
        raise SingularInputError(
            f"control field vanishes at t = {bad:.3e} s; the reduced model needs omega > 0 (use omega_tau > 0)"
        )
    v_gr = np.asarray(effective_group_velocity(omega, material, g2n), dtype=float)
    theta = np.asarray(mixing_angle(omega, g2n).theta, dtype=float)

    if model == ReducedModel.ADIABATIC:
        sin2 = np.sin(theta) ** 2
        gc = np.asarray(velocity_correction(omega, material, g2n), dtype=float)
        loss = sin2 * np.asarray(gamma_psi(omega, material), dtype=float) / (1.0 - gc)
        return TransportCoefficients(times, omega, theta, v_gr, loss, np.zeros_like(omega))

    coeffs = nonadiabatic_coefficients(omega, drive.omega_dot(times), material, g2n, csc_term)
    velocity = v_gr - SPEED_OF_LIGHT * np.asarray(coeffs.b, dtype=float)
    return TransportCoefficients(
        times=times,
        omega=omega,
        theta=theta,
        velocity=velocity,
        loss=np.asarray(coeffs.a, dtype=float),
        diffusion=np.asarray(coeffs.c, dtype=float),
    )


def _pad_profile(psi0: np.ndarray, dz: float, pad_widths: float) -> Tuple[np.ndarray, int]:
    weight = np.abs(psi0) ** 2
    total = weight.sum()
    if total == 0:
        return psi0.copy(), 0
    idx = np.arange(len(psi0))
    centre = (weight * idx).sum() / total
    width = math.sqrt(max((weight * (idx - centre) ** 2).sum() / total, 1.0))
    pad = int(math.ceil(pad_widths * width))
    return np.pad(psi0, (pad, pad)), pad


def _first_derivative(psi: np.ndarray, dz: float) -> np.ndarray:
    return (
        -np.roll(psi, -2) + 8 * np.roll(psi, -1) - 8 * np.roll(psi, 1) + np.roll(psi, 2)
    ) / (12 * dz)


def _second_derivative(psi: np.ndarray, dz: float) -> np.ndarray:
    return (
        -np.roll(psi, -2) + 16 * np.roll(psi, -1) - 30 * psi + 16 * np.roll(psi, 1) - np.roll(psi, 2)
    ) / (12 * dz**2)


def _transport_rhs(psi: np.ndarray, v: float, a: float, c: float, dz: float) -> np.ndarray:
    rhs = -v * _first_derivative(psi, dz) - a * psi
    if c != 0:
        rhs = rhs + SPEED_OF_LIGHT**2 * c * _second_derivative(psi, dz)
    return rhs


def _validity_flags(coeffs: TransportCoefficients, material: MaterialSpec) -> List[str]:
    flags = list(material.check_reduced_model_validity())
    margin = np.asarray(power_condition_margin(coeffs.omega, material))
    if np.any(margin < 1.0):
        message = f"power condition omega^2 >= 3 W12 W13 violated (min ratio {float(margin.min()):.3g})"
        logger.warning(message)
        flags.append(message)
    if np.any(coeffs.loss < 0):
        message = f"loss rate A(t) negative (min {coeffs.loss.min():.3e} 1/s); norm may grow"
        logger.warning(message)
        flags.append(message)
    if np.any(coeffs.diffusion < 0):
        message = f"diffusion C(t) negative (min {coeffs.diffusion.min():.3e} s); norm may grow"
        logger.warning(message)
        flags.append(message)
    return flags


def evolve_reduced(
    initial_psi: np.ndarray,
    drive: DriveSchedule,
    material: MaterialSpec,
    g2n: float,
    grid: SimGrid,
    method: ReducedMethod = ReducedMethod.FOURIER,
    model: ReducedModel = ReducedModel.NONADIABATIC,
    csc_term: CscTermConvention = CscTermConvention.PRINTED,
    pad_widths: float = 4.0,
    n_atoms: Optional[float] = None,
) -> PolaritonField:
    """
    Propagate a dark-polariton profile through the drive schedule.

    The profile is zero-padded by pad_widths rms widths on each side and the
    domain is treated as periodic by both methods.

    Args:
        initial_psi: Psi on grid.z() at grid.t_min
        drive: Control schedule, strictly positive over [t_min, t_max]
        material: Medium
        g2n: Collective coupling ((rad/s)^2)
        grid: Spatial and temporal grid (detuning fields unused)
        method: Exact per-mode solution or finite differences
        model: Nonadiabatic A/B/C or the adiabatic limit
        csc_term: Reading of the g^2 N gamma^2 cot csc^2 term in A
        pad_widths: Zero padding on each side in rms pulse widths
        n_atoms: Atom number used for the spin-coherence view (defaults to density * 1 m^3)

    Returns:
        PolaritonField with snapshots at grid.snapshot_steps()

    Raises:
        DomainError: Wrong profile length, W13/W12 below the configured minimum, or a direct-method
            stability limit exceeded
        SingularInputError: Control field reaching zero
    """
    psi0 = np.asarray(initial_psi, dtype=complex)
    if psi0.shape != (grid.n_z,):
        raise DomainError(f"initial profile has shape {psi0.shape}, grid expects ({grid.n_z},)")
    dz = grid.dz
    psi_padded, pad = _pad_profile(psi0, dz, pad_widths)
    n = len(psi_padded)
    z = grid.z_min + (np.arange(n) - pad) * dz

    # coefficients on the half-step grid serve both integrators
    n_steps = grid.n_steps
    half_times = grid.t_min + 0.5 * grid.dt * np.arange(2 * n_steps + 1)
    coeffs = transport_coefficients(half_times, drive, material, g2n, model, csc_term)
    flags = _validity_flags(coeffs, material)

    snapshot_steps = grid.snapshot_steps()
    logger.info(
        f"Reduced {model.value} run ({method.value}): {n} cells incl. {pad} padding per side, "
        f"{n_steps} steps, {len(snapshot_steps)} snapshots"
    )

    if method == ReducedMethod.FOURIER:
        psi_snaps = _evolve_fourier(psi_padded, coeffs, dz, snapshot_steps)
    else:
        psi_snaps = _evolve_direct(psi_padded, coeffs, dz, grid.dt, snapshot_steps)

    snap_idx = 2 * snapshot_steps
    theta = coeffs.theta[snap_idx]
    phi_snaps = _bright_profiles(psi_snaps, coeffs, snap_idx, drive, material, g2n, dz)
    norms = np.sqrt(np.sum(np.abs(psi_snaps) ** 2, axis=1) * dz)

    if n_atoms is None:
        n_atoms = material.density
    result = PolaritonField(
        z=z,
        times=coeffs.times[snap_idx],
        psi=psi_snaps,
        phi=phi_snaps,
        theta=theta,
        omega=coeffs.omega[snap_idx],
        norms=norms,
        method=method,
        model=model,
        n_atoms=n_atoms,
        flags=flags,
    )
    logger.info(f"Reduced run finished: energy ratio {result.efficiency:.4f}")
    return result


def _evolve_fourier(
    psi0: np.ndarray, coeffs: TransportCoefficients, dz: float, snapshot_steps: np.ndarray
) -> np.ndarray:
    k = 2.0 * math.pi * np.fft.fftfreq(len(psi0), d=dz)
    spectrum = np.fft.fft(psi0)
    shift = cumulative_trapezoid(coeffs.velocity, coeffs.times, initial=0.0)
    loss = cumulative_trapezoid(coeffs.loss, coeffs.times, initial=0.0)
    spread = cumulative_trapezoid(coeffs.diffusion, coeffs.times, initial=0.0)

    snaps = np.empty((len(snapshot_steps), len(psi0)), dtype=complex)
    for row, step in enumerate(snapshot_steps):
        i = 2 * step
        factor = np.exp(-1j * k * shift[i] - loss[i] - (k * SPEED_OF_LIGHT) ** 2 * spread[i])
        snaps[row] = np.fft.ifft(spectrum * factor)
    return snaps


def _evolve_direct(
    psi0: np.ndarray,
    coeffs: TransportCoefficients,
    dz: float,
    dt: float,
    snapshot_steps: np.ndarray,
) -> np.ndarray:
    courant = float(np.max(np.abs(coeffs.velocity))) * dt / dz
    if courant > 1.0:
        raise DomainError(f"direct reduced solver CFL violated: |v| dt/dz = {courant:.3f} > 1")
    diffusion_number = SPEED_OF_LIGHT**2 * float(np.max(np.abs(coeffs.diffusion))) * dt / dz**2
    if diffusion_number > 0.5:
        raise DomainError(f"direct reduced solver diffusion limit exceeded: c^2 C dt/dz^2 = {diffusion_number:.3f}")
    if np.any(coeffs.diffusion < 0):
        raise DomainError("negative diffusion makes the direct solver ill-posed; use the fourier method")

    snaps = np.empty((len(snapshot_steps), len(psi0)), dtype=complex)
    wanted = {int(s): row for row, s in enumerate(snapshot_steps)}
    psi = psi0.copy()
    v, a, c = coeffs.velocity, coeffs.loss, coeffs.diffusion
    last = int(snapshot_steps[-1])
    for step in range(last + 1):
        if step in wanted:
            snaps[wanted[step]] = psi
        if step == last:
            break
        i = 2 * step
        k1 = _transport_rhs(psi, v[i], a[i], c[i], dz)
        k2 = _transport_rhs(psi + 0.5 * dt * k1, v[i + 1], a[i + 1], c[i + 1], dz)
        k3 = _transport_rhs(psi + 0.5 * dt * k2, v[i + 1], a[i + 1], c[i + 1], dz)
        k4 = _transport_rhs(psi + dt * k3, v[i + 2], a[i + 2], c[i + 2], dz)
        psi = psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return snaps


def _bright_profiles(
    psi_snaps: np.ndarray,
    coeffs: TransportCoefficients,
    snap_idx: np.ndarray,
    drive: DriveSchedule,
    material: MaterialSpec,
    g2n: float,
    dz: float,
) -> np.ndarray:
    """Bright polariton slaved to each Psi snapshot (three-term form)."""
    times = coeffs.times[snap_idx]
    omega = coeffs.omega[snap_idx]
    angle = mixing_angle(omega, g2n)
    sin, cos = np.asarray(angle.sin), np.asarray(angle.cos)
    wp = material.w_product
    static = wp * sin * cos / (omega**2 + wp) if wp > 0 else np.zeros_like(omega)
    theta_dot = np.asarray(mixing_angle_rate(omega, drive.omega_dot(times), g2n))
    alpha = np.asarray(alpha_coefficient(omega, material))
    beta = np.asarray(beta_coefficient(omega, material, g2n))

    phi = np.empty_like(psi_snaps)
    for row in range(len(times)):
        i = snap_idx[row]
        psi = psi_snaps[row]
        psi_dot = _transport_rhs(psi, coeffs.velocity[i], coeffs.loss[i], coeffs.diffusion[i], dz)
        phi[row] = (static[row] - (alpha[row] + beta[row]) * theta_dot[row]) * psi + beta[row] * cos[row] / sin[row] * psi_dot
    return phi


@dataclass(frozen=True)
class LossIntegrals:
    """Accumulated reduced-model losses over a drive window."""

    integral_a: float
    integral_diffusion: float
    diffusion_upper_bound: float
    integral_gamma_psi: float
    threshold: float

    @property
    def loss_ok(self) -> bool:
        return abs(self.integral_a) <= self.threshold

    @property
    def diffusion_ok(self) -> bool:
        return abs(self.integral_diffusion) <= self.threshold

    @property
    def bound_ok(self) -> bool:
        return self.diffusion_upper_bound <= self.threshold


def loss_integrals(
    drive: DriveSchedule,
    material: MaterialSpec,
    g2n: float,
    wave_number: float,
    t0: Optional[float] = None,
    t1: Optional[float] = None,
    n_samples: int = 4001,
    csc_term: CscTermConvention = CscTermConvention.DIMENSIONLESS,
) -> LossIntegrals:
    """
    Integrals of A(t), k^2 c^2 C(t) and the C upper bound over [t0, t1].

    Defaults to the write ramp. Each is compared with 1/much_greater_ratio.
    """
    t0 = drive.t_start if t0 is None else t0
    t1 = drive.t_end if t1 is None else t1
    if t1 <= t0:
        raise DomainError(f"integration window [{t0}, {t1}] is empty")
    times = np.linspace(t0, t1, n_samples)
    omega = drive.omega(times)
    if np.any(omega <= 0):
        raise SingularInputError("loss integrals need a strictly positive control field over the window")
    coeffs = nonadiabatic_coefficients(omega, drive.omega_dot(times), material, g2n, csc_term)
    sin, cos = np.sin(coeffs.theta), np.cos(coeffs.theta)
    kc2 = (wave_number * SPEED_OF_LIGHT) ** 2
    return LossIntegrals(
        integral_a=float(trapezoid(coeffs.a, times)),
        integral_diffusion=float(kc2 * trapezoid(coeffs.c, times)),
        diffusion_upper_bound=float(kc2 * material.gamma13 * trapezoid(sin**4 * cos**2, times) / g2n),
        integral_gamma_psi=float(trapezoid(sin**2 * coeffs.gamma_psi, times)),
        threshold=1.0 / settings.much_greater_ratio,
    )


def storage_loss_exponent(
    drive: DriveSchedule,
    material: MaterialSpec,
    g2n: float,
    t0: float,
    t1: float,
    n_samples: int = 4001,
) -> float:
    """Integral of sin^2(theta) Gamma_Psi over [t0, t1] (dimensionless)."""
    times = np.linspace(t0, t1, n_samples)
    omega = drive.omega(times)
    if np.any(omega <= 0):
        raise SingularInputError("the loss exponent needs a strictly positive control field")
    sin2 = g2n / (omega**2 + g2n)
    return float(trapezoid(sin2 * gamma_psi(omega, material), times))

