"""Physical constants and unit helpers.

All stored rates are angular frequencies in rad/s. Conversion from Hz
happens only at the configuration boundary.
"""

import math

from scipy.constants import c, epsilon_0, hbar

SPEED_OF_LIGHT = c
HBAR = hbar
EPSILON_0 = epsilon_0

TWO_PI = 2.0 * math.pi


def hz_to_rad_s(value_hz: float) -> float:
    """Convert a frequency in Hz to an angular frequency in rad/s."""
    return TWO_PI * value_hz


def rad_s_to_hz(value_rad_s: float) -> float:
    """Convert an angular frequency in rad/s to Hz."""
    return value_rad_s / TWO_PI


def optical_angular_frequency(wavelength: float) -> float:
    """Angular optical frequency 2*pi*c/lambda for a wavelength in metres."""
    return TWO_PI * SPEED_OF_LIGHT / wavelength
