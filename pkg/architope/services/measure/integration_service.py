"""
Deterministic integration against a reference measure.

Integrals are only ever taken over boxes or box-minus-box regions; regions are
split into disjoint boxes first, so indicator integrands are integrated exactly
rather than sampled across their discontinuities.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Callable, List, Sequence, Tuple

import numpy as np

from architope.models.measure import MeasureSpec, QuadratureScheme
from architope.models.partition import Box, Region
from architope.services.errors import EvaluationError, ValidationError

from .quadrature import box_nodes

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]


def measure_cells(measure: MeasureSpec, boxes: Sequence[Box]) -> List[Box]:
    """Intersect `boxes` with every region the measure is restricted to."""
    cells = list(boxes)
    for region in measure.restriction:
        clipped: List[Box] = []
        for cell in cells:
            for piece in region.cells():
                overlap = cell.intersect(piece)
                if overlap is not None:
                    clipped.append(overlap)
        cells = clipped
    return cells


def weighted_nodes(
    boxes: Sequence[Box],
    measure: MeasureSpec,
    quad: QuadratureScheme,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature nodes over the union of `boxes` (restricted by the measure) and
    weights already multiplied by the density.
    """
    cells = measure_cells(measure, boxes)
    if not cells:
        return np.empty((0, measure.dimension)), np.empty(0)

    node_blocks, weight_blocks = [], []
    for stream, cell in enumerate(cells):
        if cell.dimension != measure.dimension:
            raise ValidationError(f"Box dimension {cell.dimension} does not match measure dimension {measure.dimension}.")
        nodes, weights = box_nodes(cell, quad, stream=stream)
        node_blocks.append(nodes)
        weight_blocks.append(weights)
    nodes = np.concatenate(node_blocks)
    # nodes lie inside the restriction cells, where the indicators equal one
    density = np.asarray(measure.density(nodes), dtype=float).reshape(-1)
    _require_finite(density, nodes, f"density of {measure.label}")
    if np.any(density < 0):
        bad = int(np.argmin(density))
        raise ValidationError(f"Density of {measure.label} is negative at node {nodes[bad].tolist()}.")
    return nodes, np.concatenate(weight_blocks) * density


def integrate_boxes(
    g: Integrand,
    boxes: Sequence[Box],
    measure: MeasureSpec,
    quad: QuadratureScheme,
) -> float:
    nodes, weights = weighted_nodes(boxes, measure, quad)
    if nodes.shape[0] == 0:
        return 0.0
    values = np.asarray(g(nodes), dtype=float).reshape(-1)
    _require_finite(values, nodes, "integrand")
    return float(np.sum(values * weights))


def integrate(g: Integrand, box: Box, measure: MeasureSpec, quad: QuadratureScheme) -> float:
    """Sum over nodes of g(x) * density(x) * weight on `box`."""
    if box.is_degenerate:
        raise ValidationError(f"Integration box must have positive side lengths: {box}.")
    return integrate_boxes(g, [box], measure, quad)


def integrate_region(g: Integrand, region: Region, measure: MeasureSpec, quad: QuadratureScheme) -> float:
    return integrate_boxes(g, region.cells(), measure, quad)


def restrict_to_region(measure: MeasureSpec, region: Region) -> MeasureSpec:
    """The finite measure mu_n with density density(x) * I_{K_n}(x)."""
    if region.dimension != measure.dimension:
        raise ValidationError("Region and measure dimensions differ.")
    if region in measure.restriction:
        return measure
    return replace(
        measure,
        restriction=measure.restriction + (region,),
        label=f"{measure.label}|K_{region.index}",
    )


def total_mass(measure: MeasureSpec, quad: QuadratureScheme) -> float:
    """Mass of a restricted (hence finite) measure."""
    if not measure.restriction:
        raise ValidationError(
            f"{measure.label} is only sigma-finite; restrict it to a region or integrate over a box."
        )
    return integrate_boxes(lambda pts: np.ones(pts.shape[0]), measure.restriction[0].cells(), measure, quad)


def _require_finite(values: np.ndarray, nodes: np.ndarray, what: str) -> None:
    finite = np.isfinite(values)
    if not finite.all():
        bad = int(np.argmin(finite))
        raise EvaluationError(what, nodes[bad])


__all__ = [
    "measure_cells",
    "weighted_nodes",
    "integrate",
    "integrate_boxes",
    "integrate_region",
    "restrict_to_region",
    "total_mass",
]
