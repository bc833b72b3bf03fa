"""
Strict-topology convergence diagnostic.

A sequence can only converge strictly to a target essentially supported in
K_1 ∪ ... ∪ K_n if all but finitely many members are supported there too. On
a finite sequence the trailing half stands in for "all but finitely many".
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from architope.models.function import FunctionHandle
from architope.models.measure import MeasureSpec, QuadratureScheme
from architope.models.partition import Partition
from architope.services.config import SUPPORT_TOL
from architope.services.errors import PreconditionError
from architope.utils.helper_functions import trailing_half

from .metrics_service import ess_support_index, local_metric_series, region_errors

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    CONVERGING = "converging"
    SUPPORT_VIOLATION = "support-violation"
    NOT_CONVERGING = "not-converging"


@dataclass(frozen=True)
class DiagnosticStep:
    k: int
    strict_error: float
    lp_distance: float
    local_metric: float
    support_index: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "strict_error": self.strict_error,
            "lp_distance": self.lp_distance,
            "local_metric": self.local_metric,
            "support_index": "unbounded" if self.support_index is None else self.support_index,
        }


@dataclass
class DiagnosticResult:
    verdict: Verdict
    target_support_index: int
    steps: List[DiagnosticStep] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "target_support_index": self.target_support_index,
            "per_step": [step.to_dict() for step in self.steps],
        }


def _exceeds(index: Optional[int], bound: int) -> bool:
    return index is None or index > bound


def strict_convergence_diagnostic(
    sequence: Sequence[FunctionHandle],
    target: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    tol: float,
    quad: QuadratureScheme,
    contraction: float = 0.5,
) -> DiagnosticResult:
    """
    Verdicts, in order of precedence:

    - support-violation: a member of the trailing half is supported beyond the
      target's support index;
    - converging: every per-region error grows by at most `tol` from step to
      step, and the final strict error is below `tol` or at most
      `contraction` times the first one;
    - not-converging otherwise.

    Args:
        sequence: Models f_1, f_2, ... in order
        target: Limit candidate; must be essentially supported in finitely many regions
        partition: Regions K_n
        measure: Reference measure
        p: Exponent of the per-region errors
        tol: Support tolerance and allowed step-to-step growth
        quad: Quadrature scheme
        contraction: Required ratio of final to first strict error

    Returns:
        DiagnosticResult with the verdict, per-step errors and support indices

    Raises:
        PreconditionError: empty sequence or a target without bounded support
    """
    if not sequence:
        raise PreconditionError("The diagnostic needs a non-empty sequence.")
    target_index = ess_support_index(target, partition, measure, quad, tol)
    if target_index is None:
        raise PreconditionError(
            f"Target {target.label} is not essentially supported in finitely many regions of the partition."
        )

    count = len(partition)
    steps: List[DiagnosticStep] = []
    norms = []
    for k, member in enumerate(sequence, start=1):
        errors = region_errors(member, target, partition, measure, p, count, quad)
        per_region = errors ** (1.0 / p)
        norms.append(per_region)
        steps.append(
            DiagnosticStep(
                k=k,
                strict_error=float(np.max(per_region)),
                lp_distance=float(np.sum(errors)) ** (1.0 / p),
                local_metric=local_metric_series(errors),
                support_index=ess_support_index(member, partition, measure, quad, tol),
            )
        )

    tail = steps[len(steps) - trailing_half(len(steps)):]
    if any(_exceeds(step.support_index, target_index) for step in tail):
        verdict = Verdict.SUPPORT_VIOLATION
    else:
        history = np.vstack(norms)
        monotone = bool(np.all(np.diff(history, axis=0) <= tol))
        first, final = steps[0].strict_error, steps[-1].strict_error
        shrinking = final < tol or final <= contraction * first
        verdict = Verdict.CONVERGING if monotone and shrinking else Verdict.NOT_CONVERGING

    logger.info("Diagnostic over %d steps: %s (target support index %d)", len(steps), verdict.value, target_index)
    return DiagnosticResult(verdict=verdict, target_support_index=target_index, steps=steps)


def limits_agree(
    first: FunctionHandle,
    second: FunctionHandle,
    partition: Partition,
    measure: MeasureSpec,
    p: float,
    quad: QuadratureScheme,
    tol: float = SUPPORT_TOL,
) -> bool:
    """Two candidate limits coincide when their strict distance is within tol."""
    errors = region_errors(first, second, partition, measure, p, len(partition), quad)
    return float(np.max(errors ** (1.0 / p))) <= tol


__all__ = [
    "Verdict",
    "DiagnosticStep",
    "DiagnosticResult",
    "strict_convergence_diagnostic",
    "limits_agree",
]
