"""Dispatch a validated RunConfig to the simulators and write the results."""

import shutil
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
from loguru import logger

from src.bloch.analysis import analyze_trajectory
from src.bloch.solver import run_storage_protocol
from src.cli.config import OutputFormat, RunConfig, RunMode
from src.cli.validation import run_validation_suite
from src.cli.writers import reduced_frame, trajectory_frame, write_csv, write_json, write_metadata
from src.core.coupling import collective_cooperativity
from src.feasibility.conditions import predicted_efficiency
from src.feasibility.report import feasibility_report, render_table
from src.polariton.reduced import evolve_reduced

EXIT_OK = 0
EXIT_FAILURE = 1


class _OutputTracker:
    """Remembers written files so a failed run leaves nothing behind."""

    def __init__(self, directory: Path):
        self.directory = directory
        self.created_dir = not directory.exists()
        self.files: List[Path] = []

    def add(self, path: Path) -> Path:
        self.files.append(path)
        return path

    def rollback(self) -> None:
        for path in self.files:
            path.unlink(missing_ok=True)
        if self.created_dir and self.directory.exists():
            shutil.rmtree(self.directory, ignore_errors=True)
        logger.warning(f"Removed {len(self.files)} partial output file(s) from {self.directory}")


def _g2n(config: RunConfig) -> float:
    return config.g2n if config.g2n is not None else collective_cooperativity(config.material)


def _initial_profile(config: RunConfig) -> np.ndarray:
    grid = config.grid
    z = grid.z()
    centre = config.reduced.pulse_center
    width = config.reduced.pulse_width
    centre = grid.z_min + 0.25 * grid.length if centre is None else centre
    width = grid.length / 20.0 if width is None else width
    return np.exp(-(((z - centre) / width) ** 2)).astype(complex)


def _simulate_full(config: RunConfig, tracker: _OutputTracker, workers: Optional[int]) -> int:
    trajectory = run_storage_protocol(
        config.material,
        config.drive,
        config.probe,
        config.grid,
        g2n=config.g2n,
        volume=config.volume,
        workers=workers,
    )
    metrics = analyze_trajectory(trajectory)
    if OutputFormat.CSV in config.formats:
        tracker.add(write_csv(trajectory_frame(trajectory), config.output / "trajectory.csv"))
    if OutputFormat.JSON in config.formats:
        payload = metrics.model_dump(mode="json")
        payload["flags"] = sorted(set(metrics.flags + trajectory.flags))
        payload["g2n"] = trajectory.g2n
        tracker.add(write_json(payload, config.output / "metrics.json"))
    return EXIT_OK


def _simulate_reduced(config: RunConfig, tracker: _OutputTracker) -> int:
    g2n = _g2n(config)
    result = evolve_reduced(
        _initial_profile(config),
        config.drive,
        config.material,
        g2n,
        config.grid,
        method=config.reduced.method,
        model=config.reduced.model,
        csc_term=config.reduced.csc_term,
        n_atoms=config.material.density * config.volume,
    )
    if OutputFormat.CSV in config.formats:
        tracker.add(write_csv(reduced_frame(result), config.output / "polariton.csv"))
    if OutputFormat.JSON in config.formats:
        payload = {
            "efficiency": result.efficiency,
            "predicted_efficiency": predicted_efficiency(
                config.drive, config.material, g2n, t0=config.grid.t_min, t1=config.grid.t_max
            ),
            "method": result.method.value,
            "model": result.model.value,
            "g2n": g2n,
            "flags": result.flags,
        }
        tracker.add(write_json(payload, config.output / "metrics.json"))
    return EXIT_OK


def _feasibility(config: RunConfig, tracker: _OutputTracker) -> int:
    report = feasibility_report(config.material, _g2n(config), config.drive, config.probe, config.grid)
    print(render_table(report))
    if OutputFormat.JSON in config.formats:
        path = config.output / "feasibility.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.to_json() + "\n", encoding="utf-8")
        tracker.add(path)
    if OutputFormat.CSV in config.formats:
        rows = [entry.model_dump() for entry in report.conditions + report.informational]
        tracker.add(write_csv(pd.DataFrame(rows), config.output / "conditions.csv"))
    return EXIT_OK


def _validate(config: RunConfig, tracker: _OutputTracker, workers: Optional[int]) -> int:
    results = run_validation_suite(workers=workers)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status}  {result.name}  value={result.value}  expected={result.expected}  {result.detail}")
    if OutputFormat.JSON in config.formats:
        payload = {"checks": [r.model_dump() for r in results], "passed": all(r.passed for r in results)}
        tracker.add(write_json(payload, config.output / "validation.json"))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


def run(config: RunConfig, workers: Optional[int] = None) -> int:
    """
    Execute one configured run.

    Args:
        config: Validated configuration
        workers: Thread cap overriding config.workers and settings.workers

    Returns:
        0 on success, 1 when a validation check fails

    Raises:
        PolaritonError: Any simulator error, after partial outputs are removed
    """
    workers = workers if workers is not None else config.workers
    tracker = _OutputTracker(config.output)
    logger.info(f"Starting {config.mode.value} run, output to {config.output}")
    try:
        if config.mode == RunMode.SIMULATE_FULL:
            status = _simulate_full(config, tracker, workers)
        elif config.mode == RunMode.SIMULATE_REDUCED:
            status = _simulate_reduced(config, tracker)
        elif config.mode == RunMode.FEASIBILITY:
            status = _feasibility(config, tracker)
        else:
            status = _validate(config, tracker, workers)
        config.output.mkdir(parents=True, exist_ok=True)
        tracker.add(
            write_metadata(config.output, config.mode.value, config.model_dump(mode="json"), tracker.files)
        )
    except Exception:
        tracker.rollback()
        raise
    logger.info(f"Finished {config.mode.value} run with status {status}")
    return status
