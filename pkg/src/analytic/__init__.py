"""Closed-form perturbative and ensemble-averaged coherences."""

from src.analytic.coherences import (
    CoherenceInputs,
    Jet,
    averaged_coherences,
    averaged_coherences_leading,
    first_order_coherences,
    static_coherences_resolvent_average,
)

__all__ = [
    "Jet",
    "CoherenceInputs",
    "first_order_coherences",
    "averaged_coherences",
    "averaged_coherences_leading",
    "static_coherences_resolvent_average",
]
