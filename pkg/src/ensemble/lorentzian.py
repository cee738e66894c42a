"""Discretisation of a Lorentzian inhomogeneous line into weighted detuning classes."""

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from loguru import logger

from src.core.errors import DomainError
from src.models.specs import DetuningScheme, MaterialSpec, SimGrid


@dataclass(frozen=True)
class LorentzianAxis:
    """Detuning classes along one transition, symmetric about line centre."""

    detunings: np.ndarray
    weights: np.ndarray
    width: float
    cutoff: float
    scheme: DetuningScheme
    truncated_mass: float

    def __len__(self) -> int:
        return len(self.detunings)


def _lorentz_cdf(x: float) -> float:
    return 0.5 + math.atan(x) / math.pi


def build_lorentzian_grid(
    width: float,
    n: int,
    cutoff: float = 30.0,
    scheme: DetuningScheme = DetuningScheme.MIDPOINT_EQUALPROB,
) -> LorentzianAxis:
    """
    Build n detuning classes for a Lorentzian of half-width `width` (rad/s).

    Nodes sit at quantiles of the distribution truncated to [-cutoff*W, cutoff*W].
    The probability beyond the cutoff is added to the two outermost classes, so
    the weights always sum to one.

    Args:
        width: Lorentzian half-width W (rad/s); zero gives the homogeneous limit
        n: Number of classes
        cutoff: Truncation in units of W
        scheme: Equal-probability midpoints or Gauss-Legendre in probability space

    Returns:
        LorentzianAxis with detunings and weights
    """
    if n < 1:
        raise DomainError(f"number of detuning classes must be at least 1, got {n}")
    if width < 0:
        raise DomainError(f"Lorentzian width must be non-negative, got {width}")
    if cutoff < 3:
        raise DomainError(f"cutoff must be at least 3 widths, got {cutoff}")

    if n == 1 or width == 0:
        if n > 1:
            logger.debug("Zero inhomogeneous width: collapsing detuning axis to one class")
        return LorentzianAxis(
            detunings=np.zeros(1),
            weights=np.ones(1),
            width=width,
            cutoff=cutoff,
            scheme=scheme,
            truncated_mass=1.0,
        )

    p_lo = _lorentz_cdf(-cutoff)
    p_hi = _lorentz_cdf(cutoff)
    mass = p_hi - p_lo

    if scheme == DetuningScheme.GAUSS:
        nodes, gl_weights = np.polynomial.legendre.leggauss(n)
        p = 0.5 * (p_lo + p_hi) + 0.5 * mass * nodes
        weights = 0.5 * mass * gl_weights
    else:
        p = p_lo + (np.arange(n) + 0.5) * mass / n
        weights = np.full(n, mass / n)

    detunings = width * np.tan(math.pi * (p - 0.5))
    # exact mirror symmetry
    detunings = 0.5 * (detunings - detunings[::-1])
    weights = 0.5 * (weights + weights[::-1])

    tail = 1.0 - weights.sum()
    weights = weights.copy()
    weights[0] += 0.5 * tail
    weights[-1] += 0.5 * tail

    return LorentzianAxis(
        detunings=detunings,
        weights=weights,
        width=width,
        cutoff=cutoff,
        scheme=scheme,
        truncated_mass=mass,
    )


@dataclass(frozen=True)
class DetuningGrid:
    """
    Tensor-product ensemble of (spin, optical) detuning classes.

    Joint classes are flattened with the optical index running fastest.
    """

    classes12: LorentzianAxis
    classes13: LorentzianAxis
    delta12: np.ndarray = field(init=False)
    delta13: np.ndarray = field(init=False)
    weights: np.ndarray = field(init=False)

    def __post_init__(self):
        d12, d13 = np.meshgrid(self.classes12.detunings, self.classes13.detunings, indexing="ij")
        w = np.outer(self.classes12.weights, self.classes13.weights)
        object.__setattr__(self, "delta12", d12.ravel())
        object.__setattr__(self, "delta13", d13.ravel())
        object.__setattr__(self, "weights", w.ravel())

    @classmethod
    def for_material(cls, material: MaterialSpec, grid: SimGrid) -> "DetuningGrid":
        """Build the ensemble a simulation grid asks for."""
        axis12 = build_lorentzian_grid(material.w12, grid.n_detuning12, grid.lorentz_cutoff, grid.scheme)
        axis13 = build_lorentzian_grid(material.w13, grid.n_detuning13, grid.lorentz_cutoff, grid.scheme)
        logger.info(
            f"Detuning grid for {material.name}: {len(axis12)} x {len(axis13)} classes, "
            f"cutoff={grid.lorentz_cutoff:g}, scheme={grid.scheme.value}"
        )
        return cls(classes12=axis12, classes13=axis13)

    @property
    def n_classes(self) -> int:
        return len(self.weights)

    @property
    def delta23(self) -> np.ndarray:
        """Per-class detuning of the 2-3 transition, fixed by the other two."""
        return self.delta13 - self.delta12

    def max_detuning(self) -> float:
        return float(np.max(np.abs(self.delta13))) if self.n_classes else 0.0


def ensemble_average(values: np.ndarray, grid: Union[DetuningGrid, LorentzianAxis]) -> Union[complex, np.ndarray]:
    """
    Weighted sum over classes along the last axis.

    Accepts a joint grid (flattened values) or a single axis. The summation order
    is fixed so repeated calls are bit-identical.
    """
    values = np.asarray(values)
    weights = grid.weights
    if values.shape[-1] != len(weights):
        raise DomainError(
            f"value count {values.shape[-1]} does not match class count {len(weights)}"
        )
    result = np.sum(values * weights, axis=-1)
    if result.ndim == 0:
        return complex(result) if np.iscomplexobj(result) else float(result)
    return result


def average_separable(values: np.ndarray, grid: DetuningGrid) -> complex:
    """
    Average a (n12, n13) array of class values without flattening.

    Used by quadrature oracles with thousands of nodes per axis.
    """
    values = np.asarray(values)
    expected = (len(grid.classes12), len(grid.classes13))
    if values.shape != expected:
        raise DomainError(f"expected values of shape {expected}, got {values.shape}")
    return complex(grid.classes12.weights @ values @ grid.classes13.weights)
