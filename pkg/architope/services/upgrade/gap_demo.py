"""
Global polynomials against their architope on the target b * I_{K_1}.

A nonzero polynomial cannot vanish on an open set, so every global fit leaks
mass onto K_2; the degree-0 architope represents the target exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

from architope.models.function import FunctionHandle
from architope.models.learner import FitConfig, PolynomialLearner
from architope.models.measure import MeasureSpec, QuadratureScheme
from architope.models.partition import Partition, boxes_of
from architope.services.errors import PreconditionError
from architope.services.learners.polynomial import Basis, PolynomialModel, least_squares
from architope.services.metrics import power_error, strict_norm

from .config import ARCHITOPE_KIND, GLOBAL_POLY_KIND
from .upgrade_service import upgrade

logger = logging.getLogger(__name__)

GAP_REGIONS = 2


@dataclass(frozen=True)
class GapRow:
    kind: str
    degree: int
    strict_error: float
    off_support_mass: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "degree": self.degree,
            "strict_error": self.strict_error,
            "off_support_mass": self.off_support_mass,
        }


def global_fit(
    target: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    degree: int,
    quad: QuadratureScheme,
    basis: Basis = "chebyshev",
) -> PolynomialModel:
    """One polynomial over K_1 ∪ K_2 minimising the summed squared residual."""
    regions = partition.regions[:GAP_REGIONS]
    return least_squares(
        target,
        boxes_of(regions),
        measure,
        degree,
        basis,
        partition.bounding_box(GAP_REGIONS),
        0.0,
        quad,
    )


def _row(
    kind: str,
    degree: int,
    model: FunctionHandle,
    target: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    quad: QuadratureScheme,
) -> GapRow:
    residual = model.minus(target)
    zero = FunctionHandle.zero(model.dimension, model.output_dimension)
    return GapRow(
        kind=kind,
        degree=degree,
        strict_error=strict_norm(residual, partition, measure, p, GAP_REGIONS, quad),
        off_support_mass=power_error(model, zero, partition.region(2).cells(), measure, 1.0, quad),
    )


def gap_demo(
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    degrees: Sequence[int],
    quad: QuadratureScheme,
    height: float = 1.0,
    basis: Basis = "chebyshev",
) -> List[GapRow]:
    """
    Compare global polynomial fits of the indicator of K_1 with its degree-0
    architope over K_1 and K_2.

    Args:
        partition: Partition with at least two regions
        measure: Reference measure
        p: Exponent of the strict error
        degrees: Degrees of the global polynomial fits, one row each
        quad: Quadrature for fits and errors
        height: Value of the indicator on K_1
        basis: Polynomial basis of the global fits

    Returns:
        One global-poly row per degree, then the architope row
    """
    if len(partition) < GAP_REGIONS:
        raise PreconditionError("The gap demo needs a partition with at least two regions.")
    target = FunctionHandle.indicator(partition.region(1), height)

    rows: List[GapRow] = []
    for degree in degrees:
        model = global_fit(target, partition, measure, int(degree), quad, basis)
        rows.append(_row(GLOBAL_POLY_KIND, int(degree), model.as_handle(), target, partition, measure, p, quad))
        logger.debug("Global degree %d: off-support mass %.3e", degree, rows[-1].off_support_mass)

    result = upgrade(
        target,
        PolynomialLearner(degree=0, basis=basis),
        partition,
        measure,
        GAP_REGIONS,
        FitConfig(p=p),
        quad=quad,
        fit_quad=quad,
    )
    rows.append(_row(ARCHITOPE_KIND, 0, result.architope.as_handle(), target, partition, measure, p, quad))

    leaking = sum(1 for row in rows[:-1] if row.off_support_mass > 0)
    logger.info(
        "Gap demo: %d/%d global fits leak onto K_2; architope strict error %.3e",
        leaking,
        len(rows) - 1,
        rows[-1].strict_error,
    )
    return rows


__all__ = ["GapRow", "GAP_REGIONS", "global_fit", "gap_demo"]
