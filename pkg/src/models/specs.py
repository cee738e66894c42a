"""Medium, drive, probe and grid specifications.

Every rate is an angular frequency in rad/s, times are in seconds and
lengths in metres. Instances are frozen so they can be shared between
worker threads.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import settings
from src.core.constants import SPEED_OF_LIGHT
from src.core.errors import DomainError

ArrayLike = Union[float, np.ndarray]

# sech(a*x) falls to 1/e at x = 1
_SECH_SCALE = math.acosh(math.e)
# Steepness of the tanh ramp profile
_TANH_STEEPNESS = 6.0


class MaterialSpec(BaseModel):
    """Parameters of an inhomogeneously broadened three-level medium."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(default="custom", description="Label")
    w12: float = Field(ge=0.0, description="Inhomogeneous width of the |1>-|2> spin transition (rad/s)")
    w13: float = Field(ge=0.0, description="Inhomogeneous width of the |1>-|3> optical transition (rad/s)")
    gamma1: float = Field(default=0.0, ge=0.0, description="Population decay of |1> (rad/s)")
    gamma2: float = Field(default=0.0, ge=0.0, description="Population decay of |2> (rad/s)")
    gamma3: float = Field(default=0.0, ge=0.0, description="Population decay of |3> (rad/s)")
    gamma12: float = Field(default=0.0, ge=0.0, description="Coherence decay of 1-2 (rad/s)")
    gamma13: float = Field(default=0.0, ge=0.0, description="Coherence decay of 1-3 (rad/s)")
    gamma23: float = Field(default=0.0, ge=0.0, description="Coherence decay of 2-3 (rad/s)")
    d13: float = Field(default=1e-30, ge=0.0, description="Dipole moment of |1>-|3> (C m)")
    density: float = Field(default=1e24, gt=0.0, description="Dopant number density (m^-3)")
    wavelength: float = Field(default=1e-6, gt=0.0, description="Probe wavelength (m)")
    provenance: str = Field(default="user supplied", description="Where the numbers come from")

    @model_validator(mode="after")
    def check_widths(self) -> "MaterialSpec":
        """The optical line must be at least as broad as the spin line."""
        if self.w12 > 0 and self.w13 < self.w12:
            raise ValueError(
                f"w13 ({self.w13:.3e}) must not be smaller than w12 ({self.w12:.3e})"
            )
        if self.w12 > 0 and self.gamma12 > self.w12:
            logger.warning(
                f"{self.name}: gamma12={self.gamma12:.3e} exceeds w12={self.w12:.3e}; "
                "solids normally have gamma12 << w12"
            )
        return self

    @property
    def w_product(self) -> float:
        """W12*W13 in (rad/s)^2."""
        return self.w12 * self.w13

    @property
    def broadening_ratio(self) -> float:
        """W13/W12, infinite for a sharp spin line."""
        if self.w12 == 0:
            return math.inf
        return self.w13 / self.w12

    @property
    def is_gas_limit(self) -> bool:
        """True when neither transition is inhomogeneously broadened."""
        return self.w12 == 0 and self.w13 == 0

    def check_reduced_model_validity(self) -> List[str]:
        """
        Check the width ordering the reduced polariton model relies on.

        Returns:
            Warning strings (empty when comfortably valid)

        Raises:
            DomainError: If W13/W12 is below the configured minimum
        """
        warnings: List[str] = []
        if self.w12 == 0:
            return warnings
        ratio = self.broadening_ratio
        if ratio < settings.min_broadening_ratio:
            raise DomainError(
                f"{self.name}: w13/w12 = {ratio:.3g} is below {settings.min_broadening_ratio:g}; "
                "the reduced model requires w12 << w13"
            )
        if ratio < settings.warn_broadening_ratio:
            message = f"w13/w12 = {ratio:.3g} is below {settings.warn_broadening_ratio:g}"
            logger.warning(f"{self.name}: {message}")
            warnings.append(message)
        return warnings


class DriveShape(Enum):
    """Time profiles of the control field."""

    CONSTANT = "constant"
    LINEAR_RAMP = "linear-ramp"
    TANH_RAMP = "tanh-ramp"
    PIECEWISE = "piecewise"


class RetrievalSpec(BaseModel):
    """Mirrored ramp-up that releases the stored pulse."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    ramp_duration: Optional[float] = Field(
        default=None, gt=0.0, description="Duration of the ramp-up (s); defaults to the write ramp"
    )
    omega_final: Optional[float] = Field(
        default=None, ge=0.0, description="Rabi frequency after the ramp-up (rad/s); defaults to omega0"
    )


def _ramp_profile(u: np.ndarray, shape: DriveShape) -> np.ndarray:
    if shape == DriveShape.TANH_RAMP:
        half = math.tanh(_TANH_STEEPNESS / 2.0)
        return 0.5 * (1.0 + np.tanh(_TANH_STEEPNESS * (u - 0.5)) / half)
    return u


def _ramp_profile_slope(u: np.ndarray, shape: DriveShape) -> np.ndarray:
    if shape == DriveShape.TANH_RAMP:
        half = math.tanh(_TANH_STEEPNESS / 2.0)
        return 0.5 * _TANH_STEEPNESS / half / np.cosh(_TANH_STEEPNESS * (u - 0.5)) ** 2
    return np.ones_like(u)


class DriveSchedule(BaseModel):
    """
    Control-field schedule: constant before the ramp, ramp down, hold, optional ramp up.

    Times outside the ramps hold the nearest plateau value, so the profile is
    continuous and piecewise monotone.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    shape: DriveShape = Field(default=DriveShape.LINEAR_RAMP, description="Ramp profile")
    omega0: float = Field(ge=0.0, description="Initial Rabi frequency (rad/s)")
    omega_tau: float = Field(default=0.0, ge=0.0, description="Rabi frequency at the end of the ramp (rad/s)")
    t_start: float = Field(default=0.0, description="Start of the write ramp (s)")
    t_end: float = Field(default=1.0, description="End of the write ramp (s)")
    hold_duration: float = Field(default=0.0, ge=0.0, description="Storage hold time (s)")
    retrieval: Optional[RetrievalSpec] = Field(default=None, description="Optional read ramp")
    points: Optional[List[Tuple[float, float]]] = Field(
        default=None, description="(time, omega) breakpoints for the piecewise shape"
    )
    probe_detuning: float = Field(default=0.0, description="One-photon detuning Delta (rad/s)")
    control_detuning: float = Field(default=0.0, description="Control detuning Delta0 (rad/s)")

    @model_validator(mode="before")
    @classmethod
    def fill_from_points(cls, data):
        """A piecewise schedule takes its plateau values from the breakpoints."""
        if isinstance(data, dict) and data.get("shape") in (DriveShape.PIECEWISE, "piecewise"):
            points = data.get("points") or []
            if len(points) >= 2:
                data = dict(data)
                data.setdefault("omega0", float(points[0][1]))
                data.setdefault("omega_tau", float(min(p[1] for p in points)))
                data.setdefault("t_start", float(points[0][0]))
                data.setdefault("t_end", float(points[-1][0]))
        return data

    @model_validator(mode="after")
    def check_schedule(self) -> "DriveSchedule":
        if self.t_end <= self.t_start:
            raise ValueError(f"t_end ({self.t_end}) must be later than t_start ({self.t_start})")
        if self.shape == DriveShape.PIECEWISE:
            if not self.points or len(self.points) < 2:
                raise ValueError("piecewise drive needs at least two points")
            times = [p[0] for p in self.points]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValueError("piecewise drive times must be strictly increasing")
            if any(p[1] < 0 for p in self.points):
                raise ValueError("piecewise drive values must be non-negative")
        elif self.shape != DriveShape.CONSTANT and self.omega_tau > self.omega0:
            raise ValueError(
                f"omega_tau ({self.omega_tau:.3e}) must not exceed omega0 ({self.omega0:.3e}) for a storage ramp"
            )
        return self

    @property
    def ramp_duration(self) -> float:
        """Duration of the write ramp (s)."""
        return self.t_end - self.t_start

    @property
    def retrieval_start(self) -> float:
        return self.t_end + self.hold_duration

    @property
    def retrieval_duration(self) -> float:
        if self.retrieval is None:
            return 0.0
        return self.retrieval.ramp_duration or self.ramp_duration

    @property
    def omega_final(self) -> float:
        """Rabi frequency once the schedule has finished."""
        if self.shape == DriveShape.CONSTANT:
            return self.omega0
        if self.shape == DriveShape.PIECEWISE:
            return float(self.points[-1][1])
        if self.retrieval is None:
            return self.omega_tau
        if self.retrieval.omega_final is None:
            return self.omega0
        return self.retrieval.omega_final

    @property
    def total_duration(self) -> float:
        """Time at which the control field reaches its final plateau (s)."""
        if self.shape == DriveShape.CONSTANT:
            return self.t_end
        if self.shape == DriveShape.PIECEWISE:
            return float(self.points[-1][0])
        return self.retrieval_start + self.retrieval_duration

    def field_ratio_k(self, w_product: float) -> float:
        """Final ramp value in units of sqrt(W12*W13)."""
        if w_product <= 0:
            return math.inf
        return self.omega_tau / math.sqrt(w_product)

    def omega(self, t: ArrayLike) -> np.ndarray:
        """Control Rabi frequency at time(s) t (rad/s)."""
        return self._evaluate(np.asarray(t, dtype=float), derivative=False)

    def omega_dot(self, t: ArrayLike) -> np.ndarray:
        """Time derivative of the control Rabi frequency (rad/s^2)."""
        return self._evaluate(np.asarray(t, dtype=float), derivative=True)

    def _evaluate(self, t: np.ndarray, derivative: bool) -> np.ndarray:
        if self.shape == DriveShape.CONSTANT:
            return np.zeros_like(t) if derivative else np.full_like(t, self.omega0)

        if self.shape == DriveShape.PIECEWISE:
            times = np.array([p[0] for p in self.points])
            values = np.array([p[1] for p in self.points])
            if not derivative:
                return np.interp(t, times, values)
            slopes = np.diff(values) / np.diff(times)
            idx = np.searchsorted(times, t, side="right") - 1
            inside = (idx >= 0) & (idx < len(slopes))
            return np.where(inside, slopes[np.clip(idx, 0, len(slopes) - 1)], 0.0)

        result = np.zeros_like(t) if derivative else np.full_like(t, self.omega0)

        # write ramp
        u = (t - self.t_start) / self.ramp_duration
        in_ramp = (u >= 0) & (u <= 1)
        uc = np.clip(u, 0.0, 1.0)
        span = self.omega_tau - self.omega0
        if derivative:
            result = np.where(in_ramp, span * _ramp_profile_slope(uc, self.shape) / self.ramp_duration, result)
        else:
            result = np.where(u >= 0, self.omega0 + span * _ramp_profile(uc, self.shape), result)

        if self.retrieval is None:
            return result

        # read ramp, mirrored
        rise = self.omega_final - self.omega_tau
        v = (t - self.retrieval_start) / self.retrieval_duration
        in_read = (v >= 0) & (v <= 1)
        vc = np.clip(v, 0.0, 1.0)
        if derivative:
            read = rise * _ramp_profile_slope(vc, self.shape) / self.retrieval_duration
            return np.where(in_read, read, np.where(v > 1, 0.0, result))
        return np.where(v >= 0, self.omega_tau + rise * _ramp_profile(vc, self.shape), result)


class EnvelopeShape(Enum):
    """Temporal shapes of the probe envelope."""

    GAUSSIAN = "gaussian"
    SECH = "sech"


class ProbeSpec(BaseModel):
    """Weak probe pulse injected at the entrance face."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    envelope_shape: EnvelopeShape = Field(default=EnvelopeShape.GAUSSIAN, description="Envelope shape")
    peak_amplitude: float = Field(default=1e-6, ge=0.0, description="Peak envelope amplitude")
    duration: float = Field(gt=0.0, description="1/e half-width of the envelope (s)")
    arrival_time: float = Field(default=0.0, description="Time of the envelope peak at the entrance (s)")

    @property
    def spectral_width(self) -> float:
        """Spectral width taken as 1/duration (rad/s)."""
        return 1.0 / self.duration

    @property
    def fluence(self) -> float:
        """Integral of |E(t)|^2 over all time."""
        if self.envelope_shape == EnvelopeShape.GAUSSIAN:
            return self.peak_amplitude**2 * self.duration * math.sqrt(math.pi / 2.0)
        return self.peak_amplitude**2 * 2.0 * self.duration / _SECH_SCALE

    def weak_probe_parameter(self, g: float, omega0: float) -> float:
        """Expansion parameter g*E/Omega at the pulse peak."""
        if omega0 == 0:
            return math.inf
        return self.peak_amplitude * g / omega0

    def check_weak_probe(self, g: float, omega0: float) -> Optional[str]:
        """Warn (never fail) when the probe is not weak compared to the control."""
        epsilon = self.weak_probe_parameter(g, omega0)
        if epsilon > settings.weak_probe_threshold:
            message = f"probe expansion parameter {epsilon:.3e} exceeds {settings.weak_probe_threshold:g}"
            logger.warning(message)
            return message
        return None

    def envelope(self, t: ArrayLike) -> np.ndarray:
        x = (np.asarray(t, dtype=float) - self.arrival_time) / self.duration
        if self.envelope_shape == EnvelopeShape.GAUSSIAN:
            return self.peak_amplitude * np.exp(-(x**2))
        return self.peak_amplitude / np.cosh(_SECH_SCALE * x)

    def envelope_dot(self, t: ArrayLike) -> np.ndarray:
        x = (np.asarray(t, dtype=float) - self.arrival_time) / self.duration
        f = self.envelope(t)
        if self.envelope_shape == EnvelopeShape.GAUSSIAN:
            return -2.0 * x / self.duration * f
        return -_SECH_SCALE / self.duration * np.tanh(_SECH_SCALE * x) * f

    def envelope_ddot(self, t: ArrayLike) -> np.ndarray:
        x = (np.asarray(t, dtype=float) - self.arrival_time) / self.duration
        f = self.envelope(t)
        if self.envelope_shape == EnvelopeShape.GAUSSIAN:
            return (4.0 * x**2 - 2.0) / self.duration**2 * f
        sech2 = 1.0 / np.cosh(_SECH_SCALE * x) ** 2
        return (_SECH_SCALE / self.duration) ** 2 * (1.0 - 2.0 * sech2) * f


class DetuningScheme(Enum):
    """Quadrature schemes for the Lorentzian detuning classes."""

    MIDPOINT_EQUALPROB = "midpoint-equalprob"
    GAUSS = "gauss"


class SimGrid(BaseModel):
    """Space, time and ensemble discretisation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    z_min: float = Field(default=0.0, description="Entrance face (m)")
    z_max: float = Field(description="Exit face (m)")
    n_z: int = Field(ge=2, description="Number of spatial cells")
    dt: float = Field(gt=0.0, description="Time step (s)")
    t_max: float = Field(gt=0.0, description="End time (s)")
    t_min: float = Field(default=0.0, description="Start time (s)")
    n_detuning12: int = Field(default=1, ge=1, description="Detuning classes on the spin axis")
    n_detuning13: int = Field(default=1, ge=1, description="Detuning classes on the optical axis")
    lorentz_cutoff: float = Field(default=30.0, ge=3.0, description="Truncation in units of W")
    scheme: DetuningScheme = Field(default=DetuningScheme.MIDPOINT_EQUALPROB, description="Quadrature scheme")
    n_snapshots: int = Field(default=100, ge=2, description="Number of stored trajectory samples")

    @model_validator(mode="after")
    def check_grid(self) -> "SimGrid":
        if self.z_max <= self.z_min:
            raise ValueError("z_max must be larger than z_min")
        if self.t_max <= self.t_min:
            raise ValueError("t_max must be larger than t_min")
        # tolerate round-off when the step is built from Courant number 1
        if SPEED_OF_LIGHT * self.dt > self.dz * (1.0 + 1e-9):
            raise ValueError(
                f"CFL violated: c*dt = {SPEED_OF_LIGHT * self.dt:.3e} m exceeds dz = {self.dz:.3e} m"
            )
        return self

    @classmethod
    def from_courant(
        cls, z_max: float, n_z: int, t_max: float, courant: float = 1.0, **kwargs
    ) -> "SimGrid":
        """Build a grid whose time step sets c*dt/dz to the given Courant number."""
        z_min = kwargs.get("z_min", 0.0)
        dz = (z_max - z_min) / (n_z - 1)
        return cls(z_max=z_max, n_z=n_z, t_max=t_max, dt=courant * dz / SPEED_OF_LIGHT, **kwargs)

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / (self.n_z - 1)

    @property
    def length(self) -> float:
        return self.z_max - self.z_min

    @property
    def courant(self) -> float:
        return SPEED_OF_LIGHT * self.dt / self.dz

    @property
    def n_steps(self) -> int:
        return int(math.ceil((self.t_max - self.t_min) / self.dt - 1e-9))

    @property
    def n_classes(self) -> int:
        return self.n_detuning12 * self.n_detuning13

    def z(self) -> np.ndarray:
        """Cell positions, entrance face first."""
        return np.linspace(self.z_min, self.z_max, self.n_z)

    def snapshot_steps(self) -> np.ndarray:
        """Step indices at which trajectory samples are stored (strictly increasing)."""
        return np.unique(np.linspace(0, self.n_steps, self.n_snapshots).round().astype(int))
