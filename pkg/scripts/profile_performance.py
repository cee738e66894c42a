#!/usr/bin/env python3
"""
Performance profiling script for the polariton storage simulator.

Times the ensemble step of the full model and both reduced solvers.
"""

import argparse
import cProfile
import io
import os
import pstats
import time
from datetime import datetime

import numpy as np
from loguru import logger

from src.bloch import run_storage_protocol
from src.cli.validation import reduced_pair
from src.core.constants import SPEED_OF_LIGHT
from src.models import DriveSchedule, DriveShape, MaterialSpec, ProbeSpec, SimGrid
from src.polariton import ReducedMethod, evolve_reduced


def _ensemble_problem(n_z: int, n13: int, steps: int):
    material = MaterialSpec(name="profile", w12=1e-3, w13=2e-2)
    dt = 0.02
    grid = SimGrid.from_courant(
        z_max=(n_z - 1) * SPEED_OF_LIGHT * dt,
        n_z=n_z,
        t_max=steps * dt,
        n_detuning13=n13,
        n_snapshots=10,
    )
    drive = DriveSchedule(shape=DriveShape.CONSTANT, omega0=1.0, t_start=0.0, t_end=grid.t_max)
    probe = ProbeSpec(duration=10.0, arrival_time=0.3 * grid.t_max)
    return material, drive, probe, grid


def profile_ensemble_step(n_z: int = 128, n13: int = 32, steps: int = 500, workers: int = 1) -> float:
    """Cell-class updates per second of the full Maxwell-Bloch step."""
    logger.info(f"Profiling ensemble step ({n_z} cells x {n13} classes, {steps} steps, {workers} worker(s))...")
    material, drive, probe, grid = _ensemble_problem(n_z, n13, steps)

    start_time = time.time()
    run_storage_protocol(material, drive, probe, grid, g2n=1.0, workers=workers)
    elapsed = time.time() - start_time

    throughput = grid.n_steps * n_z * n13 / elapsed
    logger.info(f"Ensemble step: {throughput:.3e} cell-class updates/sec")
    return throughput


def profile_reduced_solver(method: ReducedMethod, n_z: int = 256) -> float:
    """Reduced-model steps per second."""
    logger.info(f"Profiling {method.value} reduced solver ({n_z} cells)...")
    material = MaterialSpec(name="profile-reduced", w12=1.0, w13=100.0, gamma12=0.01, gamma13=1.0)
    drive = DriveSchedule(shape=DriveShape.LINEAR_RAMP, omega0=50.0, omega_tau=20.0, t_start=0.0, t_end=1.0)
    grid = SimGrid.from_courant(z_max=1e8, n_z=n_z, t_max=1.0, n_snapshots=10)
    z = grid.z()
    psi0 = np.exp(-(((z - 0.25 * grid.length) / (20.0 * grid.dz)) ** 2)).astype(complex)

    start_time = time.time()
    evolve_reduced(psi0, drive, material, 1e4, grid, method=method)
    elapsed = time.time() - start_time

    throughput = grid.n_steps / elapsed
    logger.info(f"{method.value} solver: {throughput:.0f} steps/sec")
    return throughput


def profile_solver_pair() -> float:
    start_time = time.time()
    fourier, direct = reduced_pair()
    elapsed = time.time() - start_time
    diff = np.linalg.norm(fourier.psi[-1] - direct.psi[-1]) / np.linalg.norm(fourier.psi[-1])
    logger.info(f"Solver pair: {elapsed:.2f} s, relative L2 difference {diff:.2e}")
    return elapsed


def detailed_profile():
    """Run detailed profiling with cProfile."""
    logger.info("Running detailed profiling...")
    material, drive, probe, grid = _ensemble_problem(64, 16, 200)

    profiler = cProfile.Profile()
    profiler.enable()
    run_storage_protocol(material, drive, probe, grid, g2n=1.0, workers=1)
    profiler.disable()

    s = io.StringIO()
    ps = pstats.Stats(profiler, stream=s).sort_stats("cumulative")
    ps.print_stats(20)

    logger.info("\nTop 20 functions by cumulative time:")
    print(s.getvalue())


def main():
    """Run all profiling passes."""
    parser = argparse.ArgumentParser(description="Profile the storage simulators")
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="Threads for the threaded pass")
    parser.add_argument("--detailed", action="store_true", help="Also print a cProfile breakdown")
    args = parser.parse_args()

    logger.info("=" * 60)
    logger.info("Performance Profiling")
    logger.info(f"Time: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    logger.info("=" * 60)

    results = {
        "ensemble_serial": profile_ensemble_step(workers=1),
        "ensemble_threaded": profile_ensemble_step(workers=args.workers),
        "reduced_fourier": profile_reduced_solver(ReducedMethod.FOURIER),
        "reduced_direct": profile_reduced_solver(ReducedMethod.DIRECT),
    }
    profile_solver_pair()

    logger.info("\n" + "=" * 60)
    logger.info("Performance Summary")
    logger.info("=" * 60)
    for component, throughput in results.items():
        logger.info(f"{component:25s}: {throughput:12.4g} /sec")

    speedup = results["ensemble_threaded"] / results["ensemble_serial"]
    if args.workers > 1 and speedup < 1.2:
        logger.warning(f"Threaded ensemble step gains only {speedup:.2f}x with {args.workers} workers")
        logger.info("  - Larger class grids amortise the per-step thread overhead")
    else:
        logger.success(f"Threaded speedup: {speedup:.2f}x")

    if args.detailed:
        logger.info("\n" + "=" * 60)
        detailed_profile()

    # full-scale run length estimate: 256 cells, 64x64 classes
    per_step = 256 * 64 * 64 / results["ensemble_threaded"]
    logger.info(f"Estimated {per_step * 1e3:.1f} ms per step at 256 cells x 4096 classes")
    logger.info(f"Estimated {per_step * 1e5 / 60:.1f} min for 1e5 steps")


if __name__ == "__main__":
    main()
