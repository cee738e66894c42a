"""Feasibility conditions, material presets and reports."""

from src.feasibility.conditions import (
    NonadiabaticBounds,
    StoppingRegime,
    StorageTimeLimit,
    bandwidth_check,
    condition_entry,
    evaluate_conditions,
    nonadiabatic_bounds,
    predicted_efficiency,
    spectral_selection,
    stopping_distance,
    storage_time_limit,
    suppression_exponent,
    suppression_factor,
    transparency_window,
    travel_distance,
)
from src.feasibility.presets import PRESETS, get_preset, preset_names
from src.feasibility.report import feasibility_report, render_table

__all__ = [
    "NonadiabaticBounds",
    "PRESETS",
    "StoppingRegime",
    "StorageTimeLimit",
    "bandwidth_check",
    "condition_entry",
    "evaluate_conditions",
    "feasibility_report",
    "get_preset",
    "nonadiabatic_bounds",
    "predicted_efficiency",
    "preset_names",
    "render_table",
    "spectral_selection",
    "stopping_distance",
    "storage_time_limit",
    "suppression_exponent",
    "suppression_factor",
    "transparency_window",
    "travel_distance",
]
