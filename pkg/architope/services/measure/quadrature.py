"""
Quadrature node sets over axis-aligned boxes.

Tensor-product midpoint nodes are the default up to three dimensions; beyond
that a seeded Monte Carlo rule keeps node counts bounded.
"""

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np

from architope.models.measure import MONTE_CARLO, TENSOR_MIDPOINT, QuadratureScheme
from architope.models.partition import Box
from architope.services.config import (
    DEFAULT_MC_SAMPLES,
    DEFAULT_REFINEMENT,
    TENSOR_MAX_DIMENSION,
)

logger = logging.getLogger(__name__)

# Keeps tensor grids around a million nodes per box
_TENSOR_NODE_CAP = 2**20


def default_quadrature(
    dimension: int,
    refinement: Optional[int] = None,
    seed: int = 0,
) -> QuadratureScheme:
    if dimension <= TENSOR_MAX_DIMENSION:
        per_axis = refinement or DEFAULT_REFINEMENT
        if refinement is None:
            per_axis = min(per_axis, max(2, int(round(_TENSOR_NODE_CAP ** (1.0 / dimension)))))
        return QuadratureScheme(kind=TENSOR_MIDPOINT, refinement=per_axis)
    return QuadratureScheme(kind=MONTE_CARLO, refinement=refinement or DEFAULT_MC_SAMPLES, seed=seed)


def tensor_midpoint_nodes(box: Box, refinement: int) -> Tuple[np.ndarray, float]:
    lo = np.asarray(box.lo)
    step = box.sides / refinement
    axes = [lo[k] + (np.arange(refinement) + 0.5) * step[k] for k in range(box.dimension)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, box.dimension)
    return grid, float(np.prod(step))


def monte_carlo_nodes(box: Box, samples: int, seed: int, stream: int = 0) -> Tuple[np.ndarray, float]:
    rng = np.random.default_rng([seed, stream])
    nodes = np.asarray(box.lo) + rng.random((samples, box.dimension)) * box.sides
    return nodes, box.volume / samples


def box_nodes(box: Box, quad: QuadratureScheme, stream: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and quadrature weights (without density) for one box."""
    if box.is_degenerate:
        raise ValueError(f"Cannot integrate over a degenerate box {box}.")
    if quad.kind == TENSOR_MIDPOINT:
        nodes, weight = tensor_midpoint_nodes(box, quad.refinement)
    else:
        nodes, weight = monte_carlo_nodes(box, quad.refinement, quad.seed, stream)
    logger.debug("Quadrature %s on %s: %d nodes", quad.kind, box, nodes.shape[0])
    return nodes, np.full(nodes.shape[0], weight)


__all__ = ["default_quadrature", "tensor_midpoint_nodes", "monte_carlo_nodes", "box_nodes"]
