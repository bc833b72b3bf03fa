"""
Exception hierarchy shared by all services.

`ValidationError` subclasses mean the inputs were wrong (exit code 2 on the
command line); `NumericalError` subclasses mean the computation itself failed
(exit code 3).
"""

from __future__ import annotations

from typing import Optional, Sequence


class ArchitopeError(Exception):
    pass


class ValidationError(ArchitopeError, ValueError):
    pass


class PreconditionError(ValidationError):
    pass


class AssumptionViolation(ValidationError):
    """A partition region carries no (or infinite) mass under the measure."""

    def __init__(self, index: int, mass: float) -> None:
        super().__init__(f"Region K_{index} violates 0 < mu(K_n) < inf (mass={mass:.3e}).")
        self.index = index
        self.mass = mass


class NumericalError(ArchitopeError, RuntimeError):
    pass


class EvaluationError(NumericalError):
    def __init__(self, what: str, node: Optional[Sequence[float]] = None) -> None:
        location = "" if node is None else f" at node {[float(v) for v in node]}"
        super().__init__(f"Non-finite {what}{location}.")
        self.node = None if node is None else tuple(float(v) for v in node)


class TrainingError(NumericalError):
    def __init__(self, epoch: int, loss: float) -> None:
        super().__init__(f"Training diverged at epoch {epoch} (loss={loss}).")
        self.epoch = epoch
        self.loss = loss


class RegionFitError(NumericalError):
    def __init__(self, index: int, cause: Exception) -> None:
        super().__init__(f"Fit failed on region K_{index}: {cause}")
        self.index = index
        self.cause = cause


__all__ = [
    "ArchitopeError",
    "ValidationError",
    "PreconditionError",
    "AssumptionViolation",
    "NumericalError",
    "EvaluationError",
    "TrainingError",
    "RegionFitError",
]
