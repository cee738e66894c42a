"""
Maxwell-Bloch integration of a storage and retrieval protocol.

Each step splits into half a step of the local probe-atom exchange, free
transport of the probe along z - ct, and the second local half step. The
local part integrates the field of a cell together with its atoms, so the
collective oscillation at sqrt(g2N + Omega^2) stays bounded.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from loguru import logger
from scipy.integrate import trapezoid
from scipy.signal import correlate

from config import settings
from src.bloch.equations import S12, S13, S33, ClassCoefficients, atom_derivatives, ground_state
from src.core.constants import SPEED_OF_LIGHT
from src.core.coupling import atom_number, collective_cooperativity, coupling_from_cooperativity
from src.core.errors import DomainError, NumericalInstabilityError
from src.ensemble.lorentzian import DetuningGrid, ensemble_average
from src.models.specs import DriveSchedule, DriveShape, MaterialSpec, ProbeSpec, SimGrid

DEFAULT_VOLUME = 1e-9  # m^3
# share of the input allowed to leak out before the write ramp ends
LEAK_TOLERANCE = 0.01
# output fluence allowed above the input before the run is flagged
GAIN_TOLERANCE = 1e-3
# dt times the fastest local rate
COUPLING_STEP_LIMIT = 1.0


@dataclass
class EnsembleState:
    """Probe envelope per cell and density matrices per (cell, class)."""

    time: float
    field: np.ndarray
    rho: np.ndarray

    def copy(self) -> "EnsembleState":
        return EnsembleState(self.time, self.field.copy(), self.rho.copy())


@dataclass
class BlochSystem:
    """Everything that stays fixed while an ensemble is stepped."""

    material: MaterialSpec
    drive: DriveSchedule
    probe: ProbeSpec
    detunings: DetuningGrid
    coeffs: ClassCoefficients
    g: float
    n_atoms: float
    dz: float
    workers: int = 1
    executor: Optional[ThreadPoolExecutor] = None

    @property
    def g2n(self) -> float:
        return self.g**2 * self.n_atoms

    def injected(self, t: float) -> complex:
        """Probe envelope entering the first cell at time t."""
        return complex(self.probe.envelope(t))

    def source(self, rho: np.ndarray) -> np.ndarray:
        """i g N sigma13_bar per cell."""
        return 1j * self.g * self.n_atoms * ensemble_average(rho[S13], self.detunings)


def _local_derivatives(system: BlochSystem, e: np.ndarray, rho: np.ndarray, omega: float):
    """Field and atom rates of a block of cells with transport frozen."""
    de = system.source(rho)
    drho = atom_derivatives(rho, system.g * e[:, None], omega, system.coeffs, system.material)
    return de, drho


def rk4_local(system: BlochSystem, e: np.ndarray, rho: np.ndarray, t: float, h: float):
    """
    Advance the field and atoms of each cell together over h.

    Cells do not talk to each other here, so the probe-atom exchange is
    integrated as one coupled oscillator per cell.
    """
    drive = system.drive
    om0, om_half, om1 = (float(drive.omega(s)) for s in (t, t + 0.5 * h, t + h))
    k1e, k1r = _local_derivatives(system, e, rho, om0)
    k2e, k2r = _local_derivatives(system, e + 0.5 * h * k1e, rho + 0.5 * h * k1r, om_half)
    k3e, k3r = _local_derivatives(system, e + 0.5 * h * k2e, rho + 0.5 * h * k2r, om_half)
    k4e, k4r = _local_derivatives(system, e + h * k3e, rho + h * k3r, om1)
    e_next = e + h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e)
    rho_next = rho + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
    return e_next, rho_next


def _advance_local(system: BlochSystem, e: np.ndarray, rho: np.ndarray, t: float, h: float):
    if system.executor is None or system.workers <= 1:
        return rk4_local(system, e, rho, t, h)

    chunks = np.array_split(np.arange(rho.shape[1]), system.workers)
    e_out = np.empty_like(e)
    rho_out = np.empty_like(rho)

    def work(idx: np.ndarray) -> None:
        sl = slice(int(idx[0]), int(idx[-1]) + 1)
        e_out[sl], rho_out[:, sl] = rk4_local(system, e[sl], rho[:, sl], t, h)

    list(system.executor.map(work, [c for c in chunks if len(c)]))
    return e_out, rho_out


def _transport(e: np.ndarray, nu: float) -> np.ndarray:
    """Free transport by c*dt; an exact shift at Courant number one."""
    out = e.copy()
    out[1:] = (1.0 - nu) * e[1:] + nu * e[:-1]
    return out


def step_system(state: EnsembleState, system: BlochSystem, dt: float) -> EnsembleState:
    """
    Advance probe and atoms by dt.

    Symmetric splitting: half a step of the local probe-atom exchange, a
    full step of free transport, then the second local half step. The
    first cell always carries the injected probe.

    Raises:
        DomainError: c*dt exceeds the cell size
        NumericalInstabilityError: A non-finite value appears
    """
    nu = SPEED_OF_LIGHT * dt / system.dz
    if nu > 1.0 + 1e-9:
        raise DomainError(f"CFL violated: c dt/dz = {nu:.4f}")
    nu = min(nu, 1.0)
    half = 0.5 * dt
    t_next = state.time + dt

    e, rho = _advance_local(system, state.field, state.rho, state.time, half)
    e = _transport(e, nu)
    e[0] = system.injected(t_next)
    e, rho = _advance_local(system, e, rho, state.time + half, half)
    e[0] = system.injected(t_next)

    if not np.all(np.isfinite(e)):
        cell = int(np.argmin(np.isfinite(e)))
        raise NumericalInstabilityError(
            f"non-finite probe field at t = {t_next:.6e} s", time=t_next, cell=cell
        )
    return EnsembleState(time=t_next, field=e, rho=rho)


@dataclass
class Trajectory:
    """Sampled output of a full simulation."""

    times: np.ndarray
    z: np.ndarray
    field: np.ndarray
    sigma12_bar: np.ndarray
    sigma13_bar: np.ndarray
    sigma33_bar: np.ndarray
    omega: np.ndarray
    theta: np.ndarray
    pulse_energy: np.ndarray
    spin_energy: np.ndarray
    dark_energy: np.ndarray
    bright_energy: np.ndarray
    step_times: np.ndarray
    input_series: np.ndarray
    output_series: np.ndarray
    n_atoms: float
    g2n: float
    transport_end: float
    flags: List[str] = field(default_factory=list)

    @property
    def input_fluence(self) -> float:
        return float(trapezoid(np.abs(self.input_series) ** 2, self.step_times))

    @property
    def output_fluence(self) -> float:
        return float(trapezoid(np.abs(self.output_series) ** 2, self.step_times))

    @property
    def raw_efficiency(self) -> float:
        """Transmitted over injected probe fluence, unclamped."""
        fin = self.input_fluence
        if fin == 0:
            return 0.0
        return self.output_fluence / fin

    @property
    def efficiency(self) -> float:
        """Retrieval efficiency, capped at one; a larger raw value is flagged."""
        return min(self.raw_efficiency, 1.0)

    @property
    def fidelity(self) -> float:
        """Best normalised overlap of the output and a time-shifted input envelope."""
        fin, fout = self.input_fluence, self.output_fluence
        if fin == 0 or fout == 0:
            return 0.0
        dt = self.step_times[1] - self.step_times[0] if len(self.step_times) > 1 else 1.0
        overlap = correlate(self.output_series, self.input_series, mode="full", method="fft") * dt
        return float(np.max(np.abs(overlap)) ** 2 / (fin * fout))


def _mixing_theta(omega: np.ndarray, g2n: float) -> np.ndarray:
    if g2n == 0:
        return np.zeros_like(omega)
    return np.arctan2(math.sqrt(g2n), omega)


def check_time_step(
    material: MaterialSpec, grid: SimGrid, g2n: float = 0.0, drive: Optional[DriveSchedule] = None
) -> None:
    """
    Reject a step too coarse for the fastest local dynamics.

    The outermost optical class needs dt <= 0.1 / (cutoff * W13), and the
    local exchange needs dt * (sqrt(g2N) + max Omega + fastest coherence decay)
    <= COUPLING_STEP_LIMIT.

    Raises:
        DomainError: Either bound is violated
    """
    if material.w13 > 0 and grid.n_detuning13 > 1:
        limit = 0.1 / (grid.lorentz_cutoff * material.w13)
        if grid.dt > limit * (1.0 + 1e-9):
            raise DomainError(
                f"dt = {grid.dt:.3e} s does not resolve the outermost detuning class; need dt <= {limit:.3e} s"
            )

    omega_max = 0.0
    if drive is not None:
        samples = np.linspace(grid.t_min, grid.t_max, 1001)
        omega_max = float(np.max(np.abs(drive.omega(samples))))
    rate = math.sqrt(max(g2n, 0.0)) + omega_max + max(material.gamma12, material.gamma13, material.gamma23)
    if grid.dt * rate > COUPLING_STEP_LIMIT * (1.0 + 1e-9):
        raise DomainError(
            f"dt = {grid.dt:.3e} s is too coarse for the probe-atom exchange at rate {rate:.3e} rad/s; "
            f"need dt <= {COUPLING_STEP_LIMIT / rate:.3e} s"
        )


def run_storage_protocol(
    material: MaterialSpec,
    drive: DriveSchedule,
    probe: ProbeSpec,
    grid: SimGrid,
    g2n: Optional[float] = None,
    volume: float = DEFAULT_VOLUME,
    workers: Optional[int] = None,
) -> Trajectory:
    """
    Inject, store and release a probe pulse through the full ensemble model.

    Args:
        material: Medium
        drive: Control schedule (write ramp, hold, optional read ramp)
        probe: Input pulse at the entrance face
        grid: Space, time and detuning discretisation
        g2n: Collective coupling override; defaults to the material's own
        volume: Interaction volume fixing the atom number (m^3)
        workers: Threads for the atomic update; defaults to settings.workers

    Returns:
        Trajectory with snapshots, boundary time series and validity flags
    """
    g2n = collective_cooperativity(material) if g2n is None else g2n
    if g2n < 0:
        raise DomainError(f"g2N must be non-negative, got {g2n}")
    n_atoms = atom_number(material, volume)
    g = coupling_from_cooperativity(g2n, n_atoms)
    check_time_step(material, grid, g2n, drive)

    flags: List[str] = []
    weak = probe.check_weak_probe(g, drive.omega0)
    if weak:
        flags.append(weak)

    detunings = DetuningGrid.for_material(material, grid)
    coeffs = ClassCoefficients.for_grid(detunings, material, drive.probe_detuning, drive.control_detuning)
    workers = settings.workers if workers is None else workers
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    system = BlochSystem(
        material=material,
        drive=drive,
        probe=probe,
        detunings=detunings,
        coeffs=coeffs,
        g=g,
        n_atoms=n_atoms,
        dz=grid.dz,
        workers=workers,
        executor=executor,
    )

    n_steps = grid.n_steps
    logger.info(
        f"Full simulation of {material.name}: {grid.n_z} cells x {detunings.n_classes} classes, "
        f"{n_steps} steps, g2N = {g2n:.3e}, workers = {workers}"
    )

    field0 = np.zeros(grid.n_z, dtype=complex)
    field0[0] = system.injected(grid.t_min)
    state = EnsembleState(time=grid.t_min, field=field0, rho=ground_state(grid.n_z, detunings.n_classes))

    snapshot_steps = set(int(s) for s in grid.snapshot_steps())
    samples = {key: [] for key in ("times", "field", "s12", "s13", "s33")}
    step_times = np.empty(n_steps + 1)
    inputs = np.empty(n_steps + 1, dtype=complex)
    outputs = np.empty(n_steps + 1, dtype=complex)

    try:
        for step in range(n_steps + 1):
            step_times[step] = state.time
            inputs[step] = state.field[0]
            outputs[step] = state.field[-1]
            if step in snapshot_steps:
                _record(samples, state, detunings)
                if not np.all(np.isfinite(state.rho)):
                    raise NumericalInstabilityError(
                        f"non-finite density matrix at t = {state.time:.6e} s",
                        time=state.time,
                        cell=int(np.argmin(np.isfinite(state.rho).all(axis=(0, 2)))),
                    )
                logger.debug(f"t = {state.time:.4e} s, |E|max = {np.abs(state.field).max():.3e}")
            if step == n_steps:
                break
            state = step_system(state, system, grid.dt)
    finally:
        if executor is not None:
            executor.shutdown()

    trajectory = _assemble(samples, grid, drive, step_times, inputs, outputs, n_atoms, g2n, flags)
    _flag_leakage(trajectory, drive)
    _flag_gain(trajectory)
    logger.info(
        f"Full simulation finished: efficiency {trajectory.efficiency:.4f}, fidelity {trajectory.fidelity:.4f}"
    )
    return trajectory


def _record(samples: dict, state: EnsembleState, detunings: DetuningGrid) -> None:
    samples["times"].append(state.time)
    samples["field"].append(state.field.copy())
    samples["s12"].append(ensemble_average(state.rho[S12], detunings))
    samples["s13"].append(ensemble_average(state.rho[S13], detunings))
    samples["s33"].append(ensemble_average(state.rho[S33].real, detunings))


def _assemble(
    samples: dict,
    grid: SimGrid,
    drive: DriveSchedule,
    step_times: np.ndarray,
    inputs: np.ndarray,
    outputs: np.ndarray,
    n_atoms: float,
    g2n: float,
    flags: List[str],
) -> Trajectory:
    times = np.array(samples["times"])
    field_snaps = np.array(samples["field"])
    s12 = np.array(samples["s12"])
    omega = np.asarray(drive.omega(times), dtype=float)
    theta = _mixing_theta(omega, g2n)
    dz = grid.dz

    spin = math.sqrt(n_atoms) * s12
    c, s = np.cos(theta)[:, None], np.sin(theta)[:, None]
    dark = c * field_snaps - s * spin
    bright = s * field_snaps + c * spin

    def energy(values: np.ndarray) -> np.ndarray:
        return np.sum(np.abs(values) ** 2, axis=1) * dz

    transport_end = math.inf if drive.shape == DriveShape.CONSTANT else drive.t_start
    return Trajectory(
        times=times,
        z=grid.z(),
        field=field_snaps,
        sigma12_bar=s12,
        sigma13_bar=np.array(samples["s13"]),
        sigma33_bar=np.array(samples["s33"]),
        omega=omega,
        theta=theta,
        pulse_energy=energy(field_snaps),
        spin_energy=energy(spin),
        dark_energy=energy(dark),
        bright_energy=energy(bright),
        step_times=step_times,
        input_series=inputs,
        output_series=outputs,
        n_atoms=n_atoms,
        g2n=g2n,
        transport_end=transport_end,
        flags=flags,
    )


def _flag_leakage(trajectory: Trajectory, drive: DriveSchedule) -> None:
    if drive.shape == DriveShape.CONSTANT:
        return
    fin = trajectory.input_fluence
    if fin == 0:
        return
    mask = trajectory.step_times <= drive.t_end
    if mask.sum() < 2:
        return
    leaked = float(trapezoid(np.abs(trajectory.output_series[mask]) ** 2, trajectory.step_times[mask]))
    if leaked > LEAK_TOLERANCE * fin:
        message = (
            f"insufficient stopping distance: {100 * leaked / fin:.1f}% of the input left the medium "
            "before the write ramp finished"
        )
        logger.warning(message)
        trajectory.flags.append(message)


def _flag_gain(trajectory: Trajectory) -> None:
    raw = trajectory.raw_efficiency
    if raw > 1.0 + GAIN_TOLERANCE:
        message = f"output fluence exceeds the input by {100 * (raw - 1.0):.2f}%; efficiency capped at 1"
        logger.warning(message)
        trajectory.flags.append(message)
