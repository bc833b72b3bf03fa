"""
Partition construction and queries.

Shell partitions cover the cube [-N*width, N*width]^d: K_1 is the central cube
and K_n (n >= 2) is the shell between the cubes of half-widths (n-1)*width and
n*width. Boundary points belong to the smallest index containing them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from architope.models.measure import MeasureSpec, QuadratureScheme
from architope.models.partition import Box, Partition, Region, as_points
from architope.services.config import MASS_TOL
from architope.services.errors import AssumptionViolation, ValidationError
from architope.services.measure import integrate_boxes

logger = logging.getLogger(__name__)

OUTSIDE = None  # locate() result for points not covered by any region


def make_shell_partition(dimension: int, count: int, width: float) -> Partition:
    if dimension < 1:
        raise ValidationError(f"dimension must be positive, got {dimension}.")
    if count < 1:
        raise ValidationError(f"Shell partitions need at least one region, got {count}.")
    if not width > 0:
        raise ValidationError(f"Shell width must be positive, got {width}.")

    regions = [Region(outer=Box.cube(width, dimension), index=1)]
    for n in range(2, count + 1):
        regions.append(
            Region(
                outer=Box.cube(n * width, dimension),
                inner=Box.cube((n - 1) * width, dimension),
                index=n,
            )
        )
    logger.debug("Built shell partition d=%d N=%d width=%g", dimension, count, width)
    return Partition(regions=tuple(regions), dimension=dimension)


def locate(partition: Partition, x: np.ndarray) -> Optional[int]:
    point = as_points(x, partition.dimension)
    if point.shape[0] != 1:
        raise ValidationError("locate() takes a single point; use Partition.locate_batch for batches.")
    if not np.all(np.isfinite(point)):
        raise ValidationError(f"Cannot locate non-finite point {point[0].tolist()}.")
    index = int(partition.locate_batch(point)[0])
    return index if index > 0 else OUTSIDE


def region_mass(
    partition: Partition,
    index: int,
    measure: MeasureSpec,
    quad: QuadratureScheme,
    tol: float = MASS_TOL,
) -> float:
    region = partition.region(index)
    mass = integrate_boxes(lambda pts: np.ones(pts.shape[0]), region.cells(), measure, quad)
    if not np.isfinite(mass) or mass <= tol:
        raise AssumptionViolation(index, mass)
    return mass


def overlap_mass(first: Region, second: Region, measure: MeasureSpec, quad: QuadratureScheme) -> float:
    """mu(K_n ∩ K_m); shared faces carry no mass."""
    pieces = []
    for a in first.cells():
        for b in second.cells():
            overlap = a.intersect(b)
            if overlap is not None:
                pieces.append(overlap)
    if not pieces:
        return 0.0
    return integrate_boxes(lambda pts: np.ones(pts.shape[0]), pieces, measure, quad)


def uncovered_boxes(partition: Partition, count: Optional[int] = None) -> List[Box]:
    """Boxes making up the bounding box of K_1..K_count minus their union."""
    count = len(partition) if count is None else count
    remaining = [partition.bounding_box(count)]
    for region in partition.regions[:count]:
        for cell in region.cells():
            remaining = [piece for box in remaining for piece in box.subtract(cell)]
    return remaining


@dataclass
class PartitionCheck:
    """Outcome of checking the partition invariants against one measure."""
    masses: List[float] = field(default_factory=list)
    overlaps: List[Tuple[int, int, float]] = field(default_factory=list)
    uncovered_mass: float = 0.0
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "masses": self.masses,
            "overlaps": [{"n": n, "m": m, "mass": mass} for n, m, mass in self.overlaps],
            "uncovered_mass": self.uncovered_mass,
            "violations": self.violations,
        }


def validate_partition(
    partition: Partition,
    measure: MeasureSpec,
    quad: QuadratureScheme,
    tol: float = MASS_TOL,
) -> PartitionCheck:
    check = PartitionCheck()
    for region in partition.regions:
        try:
            check.masses.append(region_mass(partition, region.index, measure, quad, tol))
        except AssumptionViolation as exc:
            check.masses.append(exc.mass)
            check.violations.append(str(exc))

    for i, first in enumerate(partition.regions):
        for second in partition.regions[i + 1:]:
            mass = overlap_mass(first, second, measure, quad)
            if mass > tol:
                check.overlaps.append((first.index, second.index, mass))
                check.violations.append(f"K_{first.index} and K_{second.index} overlap with mass {mass:.3e}.")

    gaps = uncovered_boxes(partition)
    check.uncovered_mass = (
        integrate_boxes(lambda pts: np.ones(pts.shape[0]), gaps, measure, quad) if gaps else 0.0
    )
    if check.uncovered_mass > tol:
        check.violations.append(f"Regions leave mass {check.uncovered_mass:.3e} of their bounding box uncovered.")

    if check.ok:
        logger.info("Partition with %d regions passed validation under %s", len(partition), measure.label)
    else:
        logger.warning("Partition validation found %d problem(s)", len(check.violations))
    return check


__all__ = [
    "OUTSIDE",
    "make_shell_partition",
    "locate",
    "region_mass",
    "overlap_mass",
    "uncovered_boxes",
    "PartitionCheck",
    "validate_partition",
]
