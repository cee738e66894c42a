"""Derived metrics of a full-simulation trajectory."""

import math
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from src.bloch.equations import ClassCoefficients
from src.bloch.solver import Trajectory
from src.core.constants import SPEED_OF_LIGHT
from src.core.errors import DomainError
from src.ensemble.lorentzian import DetuningGrid, ensemble_average
from src.models.specs import DriveSchedule, DriveShape, MaterialSpec, SimGrid

# peaks closer than this share of the medium to either face are not tracked
EDGE_FRACTION = 0.1
# snapshots whose peak is below this share of the global peak are ignored
PEAK_FLOOR = 0.01


class TrajectoryMetrics(BaseModel):
    """Summary numbers of one run; None marks a metric that could not be measured."""

    efficiency: float = Field(description="Transmitted over injected fluence")
    fidelity: float = Field(description="Best overlap of output and shifted input")
    group_velocity: Optional[float] = Field(default=None, description="Peak-tracking speed (m/s)")
    compression_ratio: Optional[float] = Field(default=None, description="Spatial length over c times duration")
    peak_bright_fraction: Optional[float] = Field(default=None, description="Largest bright share of the energy")
    flags: List[str] = Field(default_factory=list)


def _interpolated_peak(row: np.ndarray, j: int) -> float:
    a, b, c = row[j - 1], row[j], row[j + 1]
    denom = a - 2.0 * b + c
    if denom == 0:
        return float(j)
    return j + 0.5 * (a - c) / denom


def peak_track(trajectory: Trajectory) -> Tuple[np.ndarray, np.ndarray]:
    """Times and sub-cell positions of the |E|^2 maximum while the pulse is inside the medium."""
    intensity = np.abs(trajectory.field) ** 2
    global_max = intensity.max() if intensity.size else 0.0
    if global_max == 0:
        return np.empty(0), np.empty(0)
    n = intensity.shape[1]
    lo = max(1, int(EDGE_FRACTION * n))
    hi = min(n - 2, int((1.0 - EDGE_FRACTION) * n))
    z = trajectory.z
    dz = z[1] - z[0]
    times, positions = [], []
    for t, row in zip(trajectory.times, intensity):
        if t > trajectory.transport_end:
            break
        j = int(np.argmax(row))
        if j < lo or j > hi or row[j] < PEAK_FLOOR * global_max:
            continue
        times.append(t)
        positions.append(z[0] + _interpolated_peak(row, j) * dz)
    return np.array(times), np.array(positions)


def _rms_width(x: np.ndarray, weight: np.ndarray) -> Optional[float]:
    total = weight.sum()
    if total == 0:
        return None
    mean = (weight * x).sum() / total
    return math.sqrt((weight * (x - mean) ** 2).sum() / total)


def _compression_ratio(trajectory: Trajectory) -> Optional[float]:
    temporal = _rms_width(trajectory.step_times, np.abs(trajectory.input_series) ** 2)
    if not temporal:
        return None
    intensity = np.abs(trajectory.field) ** 2
    z = trajectory.z
    centre = 0.5 * (z[0] + z[-1])
    best, best_distance = None, math.inf
    for t, row in zip(trajectory.times, intensity):
        if t > trajectory.transport_end:
            break
        peak = row.max()
        if peak == 0 or row[0] > PEAK_FLOOR * peak or row[-1] > PEAK_FLOOR * peak:
            continue
        centroid = (row * z).sum() / row.sum()
        if abs(centroid - centre) < best_distance:
            best, best_distance = row, abs(centroid - centre)
    if best is None:
        return None
    spatial = _rms_width(z, best)
    return spatial / (SPEED_OF_LIGHT * temporal)


def analyze_trajectory(trajectory: Trajectory) -> TrajectoryMetrics:
    """
    Efficiency, fidelity, peak-tracking velocity, compression ratio and bright share.

    Raises:
        DomainError: The trajectory holds no samples
    """
    if len(trajectory.times) == 0:
        raise DomainError("cannot analyse an empty trajectory")
    flags: List[str] = []

    times, positions = peak_track(trajectory)
    velocity: Optional[float] = None
    if len(times) >= 3:
        velocity = float(np.polyfit(times, positions, 1)[0])
    else:
        flags.append("no identifiable pulse peak inside the medium; velocity absent")

    compression = _compression_ratio(trajectory)
    if compression is None:
        flags.append("pulse never fully inside the medium; compression ratio absent")

    total = trajectory.dark_energy + trajectory.bright_energy
    bright: Optional[float] = None
    if np.any(total > 0):
        mask = total > 0
        bright = float(np.max(trajectory.bright_energy[mask] / total[mask]))

    metrics = TrajectoryMetrics(
        efficiency=trajectory.efficiency,
        fidelity=trajectory.fidelity,
        group_velocity=velocity,
        compression_ratio=compression,
        peak_bright_fraction=bright,
        flags=flags,
    )
    logger.info(
        f"Trajectory metrics: efficiency={metrics.efficiency:.4f}, velocity={metrics.group_velocity}, "
        f"compression={metrics.compression_ratio}"
    )
    return metrics


def eit_transmission(
    material: MaterialSpec,
    drive: DriveSchedule,
    grid: SimGrid,
    g2n: float,
    times: np.ndarray,
    envelope: np.ndarray,
) -> float:
    """
    Linear-response fluence transmission of a pulse through the driven medium.

    Each spectral component at offset delta picks up
    exp(-(g2N L / c) chi(delta)) with chi the class average of
    b / (a b + Omega^2), a = -i delta - g13 and b = -i delta - g12.
    The result weights |exp(...)|^2 by the input power spectrum.

    Args:
        material: Medium
        drive: Constant control field
        grid: Supplies the length and the detuning classes
        g2n: Collective coupling ((rad/s)^2)
        times: Uniform sample times of the input envelope (s)
        envelope: Input envelope at the entrance face

    Raises:
        DomainError: The drive is not constant or fewer than two samples are given
    """
    if drive.shape != DriveShape.CONSTANT:
        raise DomainError("linear-response transmission needs a constant control field")
    envelope = np.asarray(envelope, dtype=complex)
    if len(envelope) < 2:
        raise DomainError("need at least two envelope samples")
    dt = float(times[1] - times[0])
    size = 2 * len(envelope)
    power = np.abs(np.fft.fft(envelope, n=size)) ** 2
    delta = -2.0 * math.pi * np.fft.fftfreq(size, d=dt)

    detunings = DetuningGrid.for_material(material, grid)
    coeffs = ClassCoefficients.for_grid(detunings, material, drive.probe_detuning, drive.control_detuning)
    a = -1j * delta[:, None] - coeffs.g13[None, :]
    b = -1j * delta[:, None] - coeffs.g12[None, :]
    chi = ensemble_average(b / (a * b + drive.omega0**2), detunings)
    gain = np.exp(-2.0 * g2n * grid.length / SPEED_OF_LIGHT * chi.real)
    total = power.sum()
    if total == 0:
        return 0.0
    return float(np.sum(power * gain) / total)
