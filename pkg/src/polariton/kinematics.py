"""Mixing angle, dark/bright polariton rotation and the reduced-model coefficients."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np
from loguru import logger

from src.core.constants import SPEED_OF_LIGHT
from src.core.errors import DomainError, SingularInputError
from src.models.specs import MaterialSpec

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class MixingAngle:
    """Rotation angle between photonic (0) and spin-wave (pi/2) character."""

    theta: ArrayLike
    sin: ArrayLike
    cos: ArrayLike

    @property
    def tan(self) -> ArrayLike:
        return self.sin / self.cos

    @property
    def cot(self) -> ArrayLike:
        return self.cos / self.sin


def mixing_angle(omega: ArrayLike, g2n: float) -> MixingAngle:
    """
    Mixing angle with tan(theta) = g*sqrt(N)/Omega.

    Args:
        omega: Control Rabi frequency (rad/s), scalar or array
        g2n: Collective coupling g^2 N ((rad/s)^2)
    """
    if g2n <= 0:
        raise DomainError(f"g2N must be positive, got {g2n}")
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("control Rabi frequency must be non-negative")
    root = math.sqrt(g2n)
    norm = np.sqrt(omega**2 + g2n)
    theta = np.arctan2(root, omega)
    return MixingAngle(theta=_scalar(theta), sin=_scalar(root / norm), cos=_scalar(omega / norm))


def mixing_angle_rate(omega: ArrayLike, omega_dot: ArrayLike, g2n: float) -> ArrayLike:
    """d(theta)/dt from the drive value and its analytic derivative."""
    omega = np.asarray(omega, dtype=float)
    return _scalar(-math.sqrt(g2n) * np.asarray(omega_dot, dtype=float) / (omega**2 + g2n))


def polariton_transform(
    e: ArrayLike, sigma12_bar: ArrayLike, n_atoms: float, theta: ArrayLike
) -> Tuple[ArrayLike, ArrayLike]:
    """Rotate (E, sqrt(N) sigma12) into dark (Psi) and bright (Phi) polaritons."""
    spin = math.sqrt(n_atoms) * np.asarray(sigma12_bar)
    c, s = np.cos(theta), np.sin(theta)
    psi = c * np.asarray(e) - s * spin
    phi = s * np.asarray(e) + c * spin
    return _scalar(psi), _scalar(phi)


def inverse_polariton_transform(
    psi: ArrayLike, phi: ArrayLike, n_atoms: float, theta: ArrayLike
) -> Tuple[ArrayLike, ArrayLike]:
    """Recover (E, sigma12_bar) from the polariton amplitudes."""
    c, s = np.cos(theta), np.sin(theta)
    e = c * np.asarray(psi) + s * np.asarray(phi)
    spin = -s * np.asarray(psi) + c * np.asarray(phi)
    return _scalar(e), _scalar(spin / math.sqrt(n_atoms))


def gamma_psi(omega: ArrayLike, material: MaterialSpec) -> ArrayLike:
    """Dark-polariton loss rate Omega^2 (Omega^2 g12 - W12^2 g13) / (Omega^2 + W12 W13)^2."""
    om2 = np.asarray(omega, dtype=float) ** 2
    if np.any(om2 <= 0):
        raise SingularInputError("gamma_psi needs a non-zero control field")
    value = om2 * (om2 * material.gamma12 - material.w12**2 * material.gamma13) / (om2 + material.w_product) ** 2
    return _scalar(value)


def alpha_coefficient(omega: ArrayLike, material: MaterialSpec) -> ArrayLike:
    """Loss-kernel coefficient alpha (s)."""
    om2 = np.asarray(omega, dtype=float) ** 2
    wp = material.w_product
    num = material.gamma13 * om2 * (3 * wp - om2) + material.gamma12 * material.w13**2 * (3 * om2 - wp)
    return _scalar(num / (om2 + wp) ** 3)


def beta_coefficient(omega: ArrayLike, material: MaterialSpec, g2n: float) -> ArrayLike:
    """Loss-kernel coefficient beta (s)."""
    om2 = np.asarray(omega, dtype=float) ** 2
    wp = material.w_product
    sin2 = g2n / (om2 + g2n)
    num = (material.gamma12 + material.gamma13) * om2 - material.gamma12 * material.w13**2 - material.gamma13 * material.w12**2
    return _scalar(sin2 * num / (om2 + wp) ** 2)


def velocity_correction(omega: ArrayLike, material: MaterialSpec, g2n: float) -> ArrayLike:
    """The dimensionless gamma_C = sin^2(theta) W12 W13 / (Omega^2 + W12 W13)."""
    om2 = np.asarray(omega, dtype=float) ** 2
    wp = material.w_product
    if wp == 0:
        return _scalar(np.zeros_like(om2))
    sin2 = g2n / (om2 + g2n)
    return _scalar(sin2 * wp / (om2 + wp))


def dispersion_correction(omega: ArrayLike, material: MaterialSpec) -> ArrayLike:
    """The dimensionless delta_C = W12 W13 (Omega^2 - W12 W13) / (Omega^2 + W12 W13)^2."""
    om2 = np.asarray(omega, dtype=float) ** 2
    wp = material.w_product
    if wp == 0:
        return _scalar(np.zeros_like(om2))
    return _scalar(wp * (om2 - wp) / (om2 + wp) ** 2)


def effective_group_velocity(omega: ArrayLike, material: MaterialSpec, g2n: float) -> ArrayLike:
    """
    Adiabatic polariton speed c cos^2(theta) / (1 - gamma_C) (m/s).

    Written so that Omega = 0 gives the finite minimum velocity.
    """
    om2 = np.asarray(omega, dtype=float) ** 2
    wp = material.w_product
    # cos^2/(1 - gamma_C) with the common Omega^2 factor cancelled
    value = SPEED_OF_LIGHT * (om2 + wp) / (om2 + wp + g2n)
    return _scalar(value)


def min_group_velocity(material: MaterialSpec, g2n: float) -> float:
    """Slowest polariton speed c W12 W13 / (W12 W13 + g^2 N) (m/s)."""
    wp = material.w_product
    if wp + g2n == 0:
        return SPEED_OF_LIGHT
    return SPEED_OF_LIGHT * wp / (wp + g2n)


def stored_fraction_at_minimum(material: MaterialSpec, g2n: float) -> float:
    """Residual sin(theta) at the slowest speed, approximated as 1 - W12 W13 / g^2 N."""
    if g2n <= 0:
        raise DomainError(f"g2N must be positive, got {g2n}")
    return 1.0 - material.w_product / g2n


class BrightStateForm(Enum):
    """Variants of the bright-polariton amplitude."""

    ADIABATIC = "adiabatic"
    APPROX = "approx"
    FULL = "full"


def power_condition_margin(omega: ArrayLike, material: MaterialSpec) -> ArrayLike:
    """Omega^2 / (3 W12 W13); at least 1 keeps the bright polariton empty."""
    wp = material.w_product
    om2 = np.asarray(omega, dtype=float) ** 2
    if wp == 0:
        return _scalar(np.full_like(om2, math.inf))
    return _scalar(om2 / (3.0 * wp))


def bright_state_amplitude(
    psi: complex,
    psi_dot: complex,
    omega: float,
    theta_dot: float,
    material: MaterialSpec,
    g2n: float,
    form: BrightStateForm = BrightStateForm.APPROX,
) -> complex:
    """
    Bright polariton slaved to the dark one.

    Args:
        psi: Dark polariton amplitude
        psi_dot: Its time derivative
        omega: Control Rabi frequency (rad/s)
        theta_dot: Mixing-angle rate (rad/s)
        material: Medium
        g2n: Collective coupling
        form: Pure adiabatic limit, the three-term approximation, or the full
            relation solved for its bright-state self term

    Returns:
        Phi
    """
    if power_condition_margin(omega, material) < 1.0:
        logger.warning(
            f"Omega^2 = {omega**2:.3e} is below 3 W12 W13 = {3 * material.w_product:.3e}; "
            "the bright polariton is no longer negligible"
        )
    angle = mixing_angle(omega, g2n)
    wp = material.w_product
    om2 = omega**2
    static = wp * angle.sin * angle.cos / (om2 + wp) if wp > 0 else 0.0

    if form == BrightStateForm.ADIABATIC:
        return complex(static * psi)

    alpha = alpha_coefficient(omega, material)
    beta = beta_coefficient(omega, material, g2n)
    if psi_dot != 0 and beta != 0:
        if angle.sin == 0:
            raise SingularInputError("cot(theta) is undefined at theta = 0")
        drift = beta * angle.cot * psi_dot
    else:
        drift = 0.0
    phi = (static - (alpha + beta) * theta_dot) * psi + drift

    if form == BrightStateForm.FULL:
        if angle.cos == 0:
            raise SingularInputError("tan(theta) is undefined at theta = pi/2")
        self_term = (wp * angle.sin**2 / (om2 + wp) if wp > 0 else 0.0) - alpha * theta_dot * angle.tan
        if self_term == 1.0:
            raise SingularInputError("bright-state self term equals one")
        phi = phi / (1.0 - self_term)
    return complex(phi)


class CscTermConvention(Enum):
    """How the g^2 N gamma^2 cot csc^2 term of A(t) is read."""

    PRINTED = "printed"
    DIMENSIONLESS = "dimensionless"


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients of the nonadiabatic dark-polariton equation of motion."""

    theta: ArrayLike
    theta_dot: ArrayLike
    alpha: ArrayLike
    beta: ArrayLike
    gamma_c: ArrayLike
    delta_c: ArrayLike
    gamma_psi: ArrayLike
    a: ArrayLike
    b: ArrayLike
    c: ArrayLike

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def nonadiabatic_coefficients(
    omega: ArrayLike,
    omega_dot: ArrayLike,
    material: MaterialSpec,
    g2n: float,
    csc_term: CscTermConvention = CscTermConvention.PRINTED,
) -> CoefficientSet:
    """
    A(t), B(t), C(t) and their ingredients for the given drive state.

    Accepts arrays, evaluating the whole drive history at once.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise SingularInputError("nonadiabatic coefficients need a strictly positive control field")
    angle = mixing_angle(omega, g2n)
    sin, cos = angle.sin, angle.cos
    tan, cot = sin / cos, cos / sin
    sin2, cos2 = sin**2, cos**2
    theta_dot = mixing_angle_rate(omega, omega_dot, g2n)

    alpha = alpha_coefficient(omega, material)
    beta = beta_coefficient(omega, material, g2n)
    gc = velocity_correction(omega, material, g2n)
    dc = dispersion_correction(omega, material)
    gp = gamma_psi(omega, material)
    ab = alpha + beta

    csc_factor = g2n if csc_term == CscTermConvention.PRINTED else 1.0
    bracket = (
        gc * cot
        + gc * tan
        - ab * tan * sin2 * gp
        - (1 + gc) * dc * tan
        - 2 * gc**2 * cot
        + gc**2 * tan
        - 2 * csc_factor * gc**2 * cot / sin2
    )
    a = (1 + gc) * sin2 * gp + theta_dot * bracket - theta_dot**2 * ab * (1 - gc - dc * tan**2)
    b = (
        -2 * gc * cos2
        - beta * gp * sin2 * cos2
        + theta_dot * sin * cos * (alpha + beta * (1 + cot**2 - dc - gc * cot**2))
    )
    c = beta * cos2**2

    return CoefficientSet(
        theta=angle.theta,
        theta_dot=theta_dot,
        alpha=alpha,
        beta=beta,
        gamma_c=gc,
        delta_c=dc,
        gamma_psi=gp,
        a=_scalar(a),
        b=_scalar(b),
        c=_scalar(c),
    )


def _scalar(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x
