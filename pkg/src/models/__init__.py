"""Models package."""

from src.models.reports import ConditionEntry, DerivedQuantities, FeasibilityReport
from src.models.specs import (
    DetuningScheme,
    DriveSchedule,
    DriveShape,
    EnvelopeShape,
    MaterialSpec,
    ProbeSpec,
    RetrievalSpec,
    SimGrid,
)

__all__ = [
    "MaterialSpec",
    "DriveSchedule",
    "DriveShape",
    "RetrievalSpec",
    "ProbeSpec",
    "EnvelopeShape",
    "SimGrid",
    "DetuningScheme",
    "ConditionEntry",
    "DerivedQuantities",
    "FeasibilityReport",
]
