"""CSV and JSON writers for run results.

Data files hold no timestamps, so a fixed configuration always produces
identical bytes. The run time is kept in metadata.json alone.
"""

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd
from loguru import logger

from config import settings
from src import __version__
from src.bloch.solver import Trajectory
from src.polariton.reduced import PolaritonField

TRAJECTORY_COLUMNS = ["t", "z", "re_e", "im_e", "abs_sigma12", "abs_sigma13", "sigma33"]
REDUCED_COLUMNS = ["t", "z", "re_psi", "im_psi", "abs_phi", "re_e", "im_e", "abs_sigma12"]
FLOAT_FORMAT = "%.10e"


def _long_frame(times: np.ndarray, z: np.ndarray, columns: Dict[str, np.ndarray]) -> pd.DataFrame:
    """Flatten (n_t, n_z) arrays into one row per (t, z) pair."""
    n_t, n_z = len(times), len(z)
    data = {"t": np.repeat(times, n_z), "z": np.tile(z, n_t)}
    for name, values in columns.items():
        data[name] = np.asarray(values).reshape(n_t * n_z)
    return pd.DataFrame(data)


def trajectory_frame(trajectory: Trajectory) -> pd.DataFrame:
    frame = _long_frame(
        trajectory.times,
        trajectory.z,
        {
            "re_e": trajectory.field.real,
            "im_e": trajectory.field.imag,
            "abs_sigma12": np.abs(trajectory.sigma12_bar),
            "abs_sigma13": np.abs(trajectory.sigma13_bar),
            "sigma33": np.real(trajectory.sigma33_bar),
        },
    )
    return frame[TRAJECTORY_COLUMNS]


def reduced_frame(result: PolaritonField) -> pd.DataFrame:
    e = result.electric_field()
    frame = _long_frame(
        result.times,
        result.z,
        {
            "re_psi": result.psi.real,
            "im_psi": result.psi.imag,
            "abs_phi": np.abs(result.phi),
            "re_e": e.real,
            "im_e": e.imag,
            "abs_sigma12": np.abs(result.spin_coherence()),
        },
    )
    return frame[REDUCED_COLUMNS]


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """Write a frame behind a `# schema_version` comment line; read back with comment='#'."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# schema_version: {settings.schema_version}\n")
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def _finite(node: Any) -> Any:
    if isinstance(node, dict):
        return {k: _finite(v) for k, v in node.items()}
    if isinstance(node, (list, tuple)):
        return [_finite(v) for v in node]
    if isinstance(node, (float, np.floating)):
        return float(node) if np.isfinite(node) else None
    return node


def write_json(payload: Dict[str, Any], path: Path) -> Path:
    """Write a JSON document with sorted keys and the schema version at the top level.

    Non-finite numbers become null.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {"schema_version": settings.schema_version, **_finite(payload)}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, sort_keys=True, allow_nan=False)
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def write_metadata(directory: Path, mode: str, config_echo: Dict[str, Any], outputs: List[Path]) -> Path:
    """The only output file that carries a timestamp."""
    return write_json(
        {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "version": __version__,
            "mode": mode,
            "config": config_echo,
            "outputs": sorted(p.name for p in outputs),
        },
        directory / "metadata.json",
    )
