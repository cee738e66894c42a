"""Lorentzian detuning ensembles and class averaging."""

from src.ensemble.lorentzian import (
    DetuningGrid,
    LorentzianAxis,
    average_separable,
    build_lorentzian_grid,
    ensemble_average,
)

__all__ = [
    "LorentzianAxis",
    "DetuningGrid",
    "build_lorentzian_grid",
    "ensemble_average",
    "average_separable",
]
