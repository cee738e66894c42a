"""First-order and Lorentzian-averaged coherences of a weakly probed Lambda system."""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from loguru import logger

from config import settings
from src.core.errors import SingularInputError
from src.models.specs import MaterialSpec

Number = Union[float, complex]


@dataclass(frozen=True)
class Jet:
    """A time series truncated to its value and first two derivatives."""

    v: Number
    d1: Optional[Number] = 0.0
    d2: Optional[Number] = 0.0

    @classmethod
    def constant(cls, value: Number) -> "Jet":
        return cls(value, 0.0, 0.0)

    def derivative(self) -> "Jet":
        if self.d1 is None:
            raise ValueError("derivative order exhausted")
        return Jet(self.d1, self.d2, None)

    def __add__(self, other) -> "Jet":
        other = _lift(other)
        return Jet(self.v + other.v, _sum(self.d1, other.d1), _sum(self.d2, other.d2))

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(-self.v, _scale(self.d1, -1), _scale(self.d2, -1))

    def __sub__(self, other) -> "Jet":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "Jet":
        return _lift(other) - self

    def __mul__(self, other) -> "Jet":
        other = _lift(other)
        d1 = None
        d2 = None
        if self.d1 is not None and other.d1 is not None:
            d1 = self.d1 * other.v + self.v * other.d1
            if self.d2 is not None and other.d2 is not None:
                d2 = self.d2 * other.v + 2 * self.d1 * other.d1 + self.v * other.d2
        return Jet(self.v * other.v, d1, d2)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        if self.v == 0:
            raise SingularInputError("division by a quantity that vanishes")
        inv = 1.0 / self.v
        d1 = None if self.d1 is None else -self.d1 * inv**2
        d2 = None
        if self.d1 is not None and self.d2 is not None:
            d2 = -self.d2 * inv**2 + 2 * self.d1**2 * inv**3
        return Jet(inv, d1, d2)

    def __truediv__(self, other) -> "Jet":
        return self * _lift(other).reciprocal()

    def __rtruediv__(self, other) -> "Jet":
        return _lift(other) * self.reciprocal()


def _lift(x) -> Jet:
    return x if isinstance(x, Jet) else Jet.constant(x)


def _sum(a, b):
    if a is None or b is None:
        return None
    return a + b


def _scale(a, s):
    return None if a is None else a * s


@dataclass(frozen=True)
class CoherenceInputs:
    """
    Probe envelope, control field and their time derivatives at one instant.

    Derivatives are explicit inputs: analytic for parametric pulses or finite
    differences of simulation data.
    """

    e: complex
    omega: float
    material: MaterialSpec
    g: float
    e_dot: complex = 0.0
    e_ddot: complex = 0.0
    omega_dot: float = 0.0
    omega_ddot: float = 0.0

    @property
    def e_jet(self) -> Jet:
        return Jet(self.e, self.e_dot, self.e_ddot)

    @property
    def omega_jet(self) -> Jet:
        return Jet(self.omega, self.omega_dot, self.omega_ddot)

    def scaled(self, factor: complex) -> "CoherenceInputs":
        """Same instant with the probe (and its derivatives) multiplied by factor."""
        return CoherenceInputs(
            e=self.e * factor,
            e_dot=self.e_dot * factor,
            e_ddot=self.e_ddot * factor,
            omega=self.omega,
            omega_dot=self.omega_dot,
            omega_ddot=self.omega_ddot,
            material=self.material,
            g=self.g,
        )


def _require_control(omega: float) -> None:
    if omega == 0:
        raise SingularInputError("control Rabi frequency is zero; the expansion in gE/Omega is undefined")


def first_order_coherences(
    inputs: CoherenceInputs, gamma12: complex, gamma13: complex
) -> Tuple[complex, complex]:
    """
    Single-class coherences to first order in gE/Omega.

    Nested operators are applied right to left onto the bracketed expression:
    sigma12 = -gE/Omega + (1/Omega)(d/dt - G13)(1/Omega)(d/dt - G12)[gE Omega/(Omega^2 + G12 G13)].

    Args:
        inputs: Field values and derivatives
        gamma12: Complex coefficient -i*Delta12 - gamma12 of the class
        gamma13: Complex coefficient -i*Delta13 - gamma13 of the class

    Returns:
        (sigma12, sigma13)
    """
    _require_control(inputs.omega)
    g = inputs.g
    e = inputs.e_jet
    om = inputs.omega_jet
    denom = om * om + gamma12 * gamma13

    bracket12 = g * e * om / denom
    inner = (bracket12.derivative() - gamma12 * bracket12) / om
    outer = inner.derivative() - gamma13 * inner
    sigma12 = -g * inputs.e / inputs.omega + outer.v / inputs.omega

    eo = e * om / denom
    e_over = e / denom
    first = eo.derivative() - gamma12 * eo
    corr = gamma13 / (om * om) * eo.derivative() + gamma12 / om * e_over.derivative()
    second = corr.derivative() - gamma12 * corr
    sigma13 = 1j * g / inputs.omega * (first.v + second.v)

    return complex(sigma12), complex(sigma13)


def averaged_coherences(inputs: CoherenceInputs) -> Tuple[complex, complex]:
    """
    Closed-form double-Lorentzian averages of the first-order coherences.

    Valid on resonance with gamma_ij << W_ij; a warning is logged when a decay
    rate exceeds the configured fraction of its width.

    Returns:
        (sigma12_bar, sigma13_bar)
    """
    _require_control(inputs.omega)
    m = inputs.material
    _warn_decay_ratio(m)

    g = inputs.g
    e = inputs.e_jet
    om = inputs.omega_jet
    om2 = om * om
    wp = m.w_product
    dbar = om2 + wp
    p12 = -m.gamma12 * om2 + m.gamma13 * m.w12**2
    p13 = -m.gamma13 * om2 + m.gamma12 * m.w13**2

    omega = inputs.omega

    s12 = (
        -(g * e * om / dbar).v
        - (g * e * om * p13 / (dbar * dbar)).derivative().v / omega**2
        - (g * e * p12 / (dbar * dbar)).derivative().v / omega
    )

    ig = 1j * g
    inner_a = (e * p12 / (dbar * dbar)).derivative() / om
    inner_b = (e * om * p13 / (dbar * dbar)).derivative() / om2
    s13 = (
        -ig * (e * p12 / (dbar * dbar)).v
        - ig / omega**3 * (e * om * wp / dbar).derivative().v
        - ig / omega**2 * (e * m.w12**2 / dbar).derivative().v
        + ig / omega * (e * om / dbar).derivative().v
        + ig / omega * inner_a.derivative().v
        + ig / omega * inner_b.derivative().v
    )
    return complex(s12), complex(s13)


def averaged_coherences_leading(inputs: CoherenceInputs) -> Tuple[complex, complex]:
    """
    Only the non-derivative terms of the averaged coherences.

    The second-derivative terms of sigma13_bar are dropped here; this is the
    form the polariton reduction builds on.
    """
    _require_control(inputs.omega)
    m = inputs.material
    om2 = inputs.omega**2
    dbar = om2 + m.w_product
    p12 = -m.gamma12 * om2 + m.gamma13 * m.w12**2
    s12 = -inputs.g * inputs.e * inputs.omega / dbar
    s13 = -1j * inputs.g * inputs.e * p12 / dbar**2
    return complex(s12), complex(s13)


def static_coherences_resolvent_average(inputs: CoherenceInputs) -> Tuple[complex, complex]:
    """
    Exact Lorentzian average of the static single-class coherences.

    Averaging a response analytic in the lower half detuning plane over a
    Lorentzian replaces -i*Delta - gamma by -(gamma + W). The spin coherence
    agrees with the closed form above to order gamma/W; the optical coherence
    is proportional to W12 rather than to the homogeneous rates.
    """
    _require_control(inputs.omega)
    m = inputs.material
    g12 = -(m.gamma12 + m.w12)
    g13 = -(m.gamma13 + m.w13)
    denom = inputs.omega**2 + g12 * g13
    s12 = -inputs.g * inputs.e * inputs.omega / denom
    s13 = -1j * g12 * inputs.g * inputs.e / denom
    return complex(s12), complex(s13)


def _warn_decay_ratio(material: MaterialSpec) -> None:
    limit = settings.decay_to_width_warning
    for gamma, width, label in (
        (material.gamma12, material.w12, "gamma12/w12"),
        (material.gamma13, material.w13, "gamma13/w13"),
    ):
        if width > 0 and gamma / width > limit:
            logger.warning(f"{material.name}: {label} = {gamma / width:.3g} exceeds {limit:g}")
