"""
Measure Data Models

A reference measure is a Lebesgue density, optionally restricted to a tuple of
partition regions (the finite measures mu_n of the upgrade construction).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Tuple

import numpy as np

from .partition import Region, as_points

DensityFn = Callable[[np.ndarray], np.ndarray]

TENSOR_MIDPOINT = "tensor-midpoint"
MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class MeasureSpec:
    """Borel measure on R^d given by its density w.r.t. Lebesgue."""
    dimension: int
    density: DensityFn  # base density, vectorised over an (n, d) array
    label: str
    restriction: Tuple[Region, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"Measure dimension must be positive, got {self.dimension}.")

    @property
    def is_finite_restriction(self) -> bool:
        return bool(self.restriction)

    def pointwise_density(self, points: np.ndarray) -> np.ndarray:
        """Density including the indicators of every restricting region."""
        pts = as_points(points, self.dimension)
        values = np.asarray(self.density(pts), dtype=float).reshape(-1)
        for region in self.restriction:
            values = values * region.membership(pts)
        return values


@dataclass(frozen=True)
class QuadratureScheme:
    kind: Literal["tensor-midpoint", "monte-carlo"] = TENSOR_MIDPOINT
    refinement: int = 512  # nodes per axis (tensor) or samples per box (MC)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (TENSOR_MIDPOINT, MONTE_CARLO):
            raise ValueError(f"Unknown quadrature kind '{self.kind}'.")
        if self.kind == TENSOR_MIDPOINT and self.refinement < 2:
            raise ValueError("Tensor refinement must be at least 2 nodes per axis.")
        if self.kind == MONTE_CARLO and self.refinement < 1:
            raise ValueError("Monte Carlo needs at least one sample.")
        if not 0 <= self.seed < 2**64:
            raise ValueError("Quadrature seed must be a 64-bit unsigned integer.")


__all__ = ["MeasureSpec", "QuadratureScheme", "DensityFn", "TENSOR_MIDPOINT", "MONTE_CARLO"]
