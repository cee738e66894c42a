"""Full Maxwell-Bloch reference solver."""

from src.bloch.analysis import TrajectoryMetrics, analyze_trajectory, eit_transmission, peak_track
from src.bloch.equations import ClassCoefficients, atom_derivatives, ground_state, rk4_atoms
from src.bloch.solver import (
    BlochSystem,
    EnsembleState,
    Trajectory,
    check_time_step,
    run_storage_protocol,
    step_system,
)

__all__ = [
    "BlochSystem",
    "ClassCoefficients",
    "EnsembleState",
    "Trajectory",
    "TrajectoryMetrics",
    "analyze_trajectory",
    "atom_derivatives",
    "check_time_step",
    "eit_transmission",
    "ground_state",
    "peak_track",
    "rk4_atoms",
    "run_storage_protocol",
    "step_system",
]
