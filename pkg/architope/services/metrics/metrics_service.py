"""
Error functionals over a partition.

Every functional is derived from the per-region p-th-power errors

    e_n = int_{K_n} ||f(x) - g(x)||^p dmu(x),

summed in fixed index order so results do not depend on evaluation order.
"""

from __future__ import annotations

import logging
import math
from typing import Optional, Sequence, Union

import numpy as np

from architope.models.function import FunctionHandle, check_compatible
from architope.models.measure import MeasureSpec, QuadratureScheme
from architope.models.partition import Box, Partition, Region
from architope.models.report import ErrorReport
from architope.services.config import SUPPORT_TOL
from architope.services.errors import EvaluationError, ValidationError
from architope.services.measure import weighted_nodes

logger = logging.getLogger(__name__)


def _check_exponent(p: float) -> None:
    if not (1.0 <= p < math.inf):
        raise ValidationError(f"Exponent p must lie in [1, inf), got {p}.")


def _check_truncation(partition: Partition, count: int) -> None:
    if not 1 <= count <= len(partition):
        raise ValidationError(f"Truncation {count} outside 1..{len(partition)}.")


def power_error(
    f: FunctionHandle,
    g: FunctionHandle,
    boxes: Sequence[Box],
    measure: MeasureSpec,
    p: float,
    quad: QuadratureScheme,
) -> float:
    """int ||f - g||^p dmu over the union of `boxes`."""
    nodes, weights = weighted_nodes(boxes, measure, quad)
    if nodes.shape[0] == 0:
        return 0.0
    gap = np.linalg.norm(f(nodes) - g(nodes), axis=1)
    finite = np.isfinite(gap)
    if not finite.all():
        raise EvaluationError(f"evaluation of {f.label} or {g.label}", nodes[int(np.argmin(finite))])
    return float(np.sum(gap**p * weights))


def region_errors(
    f: FunctionHandle,
    g: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    count: int,
    quad: QuadratureScheme,
) -> np.ndarray:
    """e_1..e_count as an array."""
    _check_exponent(p)
    _check_truncation(partition, count)
    check_compatible(f, g)
    return np.array(
        [power_error(f, g, region.cells(), measure, p, quad) for region in partition.regions[:count]]
    )


def lp_distance(
    f: FunctionHandle,
    g: FunctionHandle,
    measure: MeasureSpec,
    region_or_box: Union[Region, Box],
    p: float,
    quad: QuadratureScheme,
) -> float:
    _check_exponent(p)
    check_compatible(f, g)
    boxes = region_or_box.cells() if isinstance(region_or_box, Region) else [region_or_box]
    return power_error(f, g, boxes, measure, p, quad) ** (1.0 / p)


def lp_distance_over(
    f: FunctionHandle,
    g: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    count: int,
    quad: QuadratureScheme,
) -> float:
    """L^p distance over K_1 ∪ ... ∪ K_count."""
    return float(np.sum(region_errors(f, g, partition, measure, p, count, quad))) ** (1.0 / p)


def lp_metric(
    f: FunctionHandle,
    g: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    count: int,
    quad: QuadratureScheme,
) -> float:
    """The series sum_n e_n, truncated after `count` regions."""
    return float(np.sum(region_errors(f, g, partition, measure, p, count, quad)))


def strict_norm(
    f: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    count: int,
    quad: QuadratureScheme,
) -> float:
    """||f||_{p:count} = max over K_1..K_count of the per-region L^p norms."""
    zero = FunctionHandle.zero(f.dimension, f.output_dimension)
    errors = region_errors(f, zero, partition, measure, p, count, quad)
    return float(np.max(errors ** (1.0 / p)))


def local_metric_series(errors: np.ndarray) -> float:
    weights = 0.5 ** np.arange(1, errors.size + 1)
    return float(np.sum(weights * errors / (1.0 + errors)))


def local_metric_tail_bound(terms: int) -> float:
    """The dropped terms of the local metric series add up to at most 2^-terms."""
    return 0.5**terms


def local_metric(
    f: FunctionHandle,
    g: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    terms: int,
    quad: QuadratureScheme,
) -> float:
    return local_metric_series(region_errors(f, g, partition, measure, p, terms, quad))


def direct_sum_norm(values: Sequence[float], q: float) -> float:
    """
    l^q norm of per-region norms. q = inf gives the strict norm, q = 1 the sum
    norm; on n regions ||x||^(q) <= ||x||' <= n^(1 - 1/q) ||x||^(q).
    """
    if q < 1:
        raise ValidationError(f"q must be at least 1, got {q}.")
    return float(np.linalg.norm(np.asarray(values, dtype=float), ord=q))


def error_report(
    f: FunctionHandle,
    g: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    count: int,
    quad: QuadratureScheme,
    label: str = "",
) -> ErrorReport:
    """
    Per-region and aggregate errors of f against g over K_1..K_count.

    Args:
        f: Approximation
        g: Reference function
        partition: Regions K_n
        measure: Reference measure, restricted to each region
        p: Exponent (>= 1)
        count: Truncation N; regions beyond it are not measured
        quad: Quadrature scheme
        label: Report label (defaults to "<f> vs <g>")

    Returns:
        ErrorReport with per-region norms, the L^p total, the strict norm and
        the local metric truncated at `count`
    """
    errors = region_errors(f, g, partition, measure, p, count, quad)
    norms = errors ** (1.0 / p)
    power_sum = float(np.sum(errors))
    report = ErrorReport(
        per_region=tuple((n, float(value)) for n, value in enumerate(norms, start=1)),
        lp_total=power_sum ** (1.0 / p),
        lp_power_sum=power_sum,
        strict_norm_n=float(np.max(norms)),
        local_metric=local_metric_series(errors),
        local_metric_tail=local_metric_tail_bound(count),
        p=p,
        truncation=count,
        label=label or f"{f.label} vs {g.label}",
    )
    logger.debug("Error report %s: lp=%.3e strict=%.3e", report.label, report.lp_total, report.strict_norm_n)
    return report


def region_masses(
    f: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    quad: QuadratureScheme,
) -> np.ndarray:
    """Per-region L^1 mass of ||f||."""
    zero = FunctionHandle.zero(f.dimension, f.output_dimension)
    return region_errors(f, zero, partition, measure, 1.0, len(partition), quad)


def ess_support_index(
    f: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    quad: QuadratureScheme,
    tol: float = SUPPORT_TOL,
) -> Optional[int]:
    """
    Smallest n with negligible mass (<= tol) on every K_m, m > n.

    Returns 0 for an (essentially) zero function and None ("unbounded") when
    the last region still carries mass.
    """
    if not tol > 0:
        raise ValidationError(f"Support tolerance must be positive, got {tol}.")
    masses = region_masses(f, partition, measure, quad)
    carrying = np.nonzero(masses > tol)[0]
    if carrying.size == 0:
        return 0
    last = int(carrying[-1]) + 1
    if last == len(partition):
        return None
    return last


__all__ = [
    "power_error",
    "region_errors",
    "lp_distance",
    "lp_distance_over",
    "lp_metric",
    "strict_norm",
    "local_metric",
    "local_metric_series",
    "local_metric_tail_bound",
    "direct_sum_norm",
    "error_report",
    "region_masses",
    "ess_support_index",
]
