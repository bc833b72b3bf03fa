"""
The architope upgrade: fit one base model per region under the restricted
measure mu_n, then gate the fits together with the region indicators.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional

import numpy as np

from architope.models.architope import Architope, Tail, Term
from architope.models.function import FunctionHandle
from architope.models.learner import FitConfig, FitReport
from architope.models.measure import MeasureSpec, QuadratureScheme
from architope.models.partition import Partition
from architope.models.report import ErrorReport
from architope.services import cache
from architope.services.errors import ArchitopeError, RegionFitError, ValidationError
from architope.services.learners import Learner, Model, fit_model, model_from_dict, zero_model
from architope.services.measure import default_quadrature, restrict_to_region
from architope.services.metrics import error_report, lp_distance
from architope.services.partition import region_mass

from .config import DEFAULT_TAIL_SCALE, DEFAULT_TERM_SCALE, MAX_FIT_WORKERS

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UpgradeResult:
    architope: Architope
    report: ErrorReport


def evaluate(architope: Architope, x: np.ndarray) -> np.ndarray:
    return architope.evaluate(x)


def as_function(architope: Architope, label: str = "architope") -> FunctionHandle:
    return architope.as_handle(label)


def _cached_fit(
    learner: Learner,
    target: FunctionHandle,
    partition: Partition,
    index: int,
    measure: MeasureSpec,
    config: FitConfig,
    quad: Optional[QuadratureScheme],
    cache_key: Optional[str],
) -> Model:
    key = cache.fit_key(cache_key, index, learner.to_dict(), config.to_dict()) if cache_key else None
    if key:
        hit = cache.get_model(key)
        if hit is not None:
            logger.info("Reusing cached fit for K_%d", index)
            report = hit.get("report")
            model = model_from_dict(hit["model"])
            if report:
                report = FitReport(**{**report, "loss_trace": tuple(report["loss_trace"])})
                model = replace(model, fit_report=report)
            return model

    model = fit_model(learner, target, partition.region(index), measure, config, quad)
    if key:
        payload: Dict[str, Any] = {"model": model.to_dict()}
        if model.fit_report is not None:
            payload["report"] = model.fit_report.to_dict()
        cache.set_model(key, payload)
    return model


def upgrade(
    target: FunctionHandle,
    learner: Learner,
    partition: Partition,
    measure: MeasureSpec,
    count: int,
    config: FitConfig,
    quad: Optional[QuadratureScheme] = None,
    fit_quad: Optional[QuadratureScheme] = None,
    cache_key: Optional[str] = None,
) -> UpgradeResult:
    """
    Fit f_i on K_i for i = 1..count with beta_i = 1 and tail (0, zero model),
    and report the errors of the assembled architope against `target` in
    the exponent `config.p`.

    Args:
        target: Function to approximate on K_1..K_count
        learner: Base model class fitted once per region
        partition: Regions K_n; only the first `count` are fitted
        measure: Reference measure, restricted to each region for its fit
        count: Number of regions to fit (1..len(partition))
        config: Fit settings, including the exponent p
        quad: Quadrature for the reported errors (default for the dimension if None)
        fit_quad: Quadrature for the fit nodes (the learner's node budget if None)
        cache_key: Config hash; when set, fitted models are read from and written to the disk cache

    Returns:
        UpgradeResult holding the architope and its ErrorReport against `target`

    Raises:
        AssumptionViolation: a fitted region has no mass under `measure`
        RegionFitError: fitting region K_i failed numerically
    """
    if not 1 <= count <= len(partition):
        raise ValidationError(f"Cannot fit {count} regions of a partition with {len(partition)}.")
    if target.dimension != partition.dimension:
        raise ValidationError(f"Target dimension {target.dimension} does not match the partition.")
    quad = quad or default_quadrature(partition.dimension)
    indices = list(range(1, count + 1))
    for index in indices:
        region_mass(partition, index, measure, quad)

    def fit_one(index: int) -> Model:
        try:
            return _cached_fit(learner, target, partition, index, measure, config, fit_quad, cache_key)
        except ValidationError as exc:
            raise ValidationError(f"K_{index}: {exc}") from exc
        except (ArchitopeError, ArithmeticError, np.linalg.LinAlgError) as exc:
            raise RegionFitError(index, exc) from exc

    workers = min(MAX_FIT_WORKERS, count)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            models = list(pool.map(fit_one, indices))
    else:
        models = [fit_one(index) for index in indices]

    terms = tuple(Term(index, DEFAULT_TERM_SCALE, model) for index, model in zip(indices, models))
    tail = Tail(DEFAULT_TAIL_SCALE, zero_model(partition.bounding_box(), target.output_dimension))
    architope = Architope(partition=partition, terms=terms, tail=tail, p=config.p)

    report = error_report(
        architope.as_handle(),
        target,
        partition,
        measure,
        config.p,
        count,
        quad,
        label=f"architope vs {target.label}",
    )
    logger.info(
        "Upgraded %s over %d regions: L^%g error %.3e, strict %.3e",
        learner.kind,
        count,
        config.p,
        report.lp_total,
        report.strict_norm_n,
    )
    return UpgradeResult(architope=architope, report=report)


def rescale(architope: Architope, factor: float) -> Architope:
    """Multiply every beta, the tail's included."""
    terms = tuple(Term(t.index, factor * t.scale, t.model) for t in architope.terms)
    tail = Tail(factor * architope.tail.scale, architope.tail.model) if architope.tail else None
    return Architope(architope.partition, terms, tail, architope.p)


def scale_models(architope: Architope, factor: float) -> Architope:
    """Scale every f_i (and f_0) instead of the betas."""
    terms = tuple(Term(t.index, t.scale, t.model.scaled(factor)) for t in architope.terms)
    tail = Tail(architope.tail.scale, architope.tail.model.scaled(factor)) if architope.tail else None
    return Architope(architope.partition, terms, tail, architope.p)


def factor_scales(
    architope: Architope,
    measure: MeasureSpec,
    p: float,
    quad: QuadratureScheme,
) -> Architope:
    """
    Re-expose (beta_i, f_i): beta_i becomes beta_i * ||f_i||_{L^p(mu_i)} and f_i
    is normalised to unit norm on K_i. Terms with a zero model keep their scale.
    """
    terms: List[Term] = []
    for term in architope.terms:
        region = architope.partition.region(term.index)
        handle = term.model.as_handle()
        zero = FunctionHandle.zero(handle.dimension, handle.output_dimension)
        norm = lp_distance(handle, zero, restrict_to_region(measure, region), region, p, quad)
        if norm > 0:
            terms.append(Term(term.index, term.scale * norm, term.model.scaled(1.0 / norm)))
        else:
            terms.append(term)
    return Architope(architope.partition, tuple(terms), architope.tail, architope.p)


def containment_architope(model: Model, partition: Partition, count: Optional[int] = None) -> Architope:
    """
    The same model on regions 1..count and as the tail. With every region
    present it evaluates exactly like `model`.
    """
    count = len(partition) if count is None else count
    terms = tuple(Term(index, 1.0, model) for index in range(1, count + 1))
    return Architope(partition, terms, Tail(1.0, model))


__all__ = [
    "UpgradeResult",
    "evaluate",
    "as_function",
    "upgrade",
    "rescale",
    "scale_models",
    "factor_scales",
    "containment_architope",
]
