"""
Architope Data Model

f(x) = sum_i beta_i I_{K_i}(x) f_i(x) + beta_0 f_0(x) I^+(x), where I^+ marks
points outside every region of the partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .function import FunctionHandle
from .partition import Partition, as_points


@dataclass(frozen=True, eq=False)
class Term:
    index: int
    scale: float
    model: Any  # PolynomialModel | MlpModel

    def to_dict(self) -> Dict[str, Any]:
        return {"index": self.index, "scale": self.scale, "model": self.model.to_dict()}


@dataclass(frozen=True, eq=False)
class Tail:
    scale: float
    model: Any

    def to_dict(self) -> Dict[str, Any]:
        return {"scale": self.scale, "model": self.model.to_dict()}


@dataclass(frozen=True, eq=False)
class Architope:
    partition: Partition
    terms: Tuple[Term, ...]
    tail: Optional[Tail] = None
    p: float = 2.0
    _by_index: Dict[int, Term] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=lambda t: t.index)))
        indices = [term.index for term in self.terms]
        if len(set(indices)) != len(indices):
            raise ValueError(f"Region indices must be distinct, got {indices}.")
        for index in indices:
            if not 1 <= index <= len(self.partition):
                raise ValueError(f"Term index {index} outside 1..{len(self.partition)}.")
        scales = [term.scale for term in self.terms] + ([self.tail.scale] if self.tail else [])
        if not any(scale != 0 for scale in scales):
            raise ValueError("At least one of the scales beta_0..beta_n must be non-zero.")
        members = [term.model for term in self.terms] + ([self.tail.model] if self.tail else [])
        for model in members:
            if model.dimension != self.partition.dimension:
                raise ValueError("Model and partition dimensions differ.")
        if len({model.output_dimension for model in members}) > 1:
            raise ValueError("All models of an architope must share one output dimension.")
        object.__setattr__(self, "_by_index", {term.index: term for term in self.terms})

    @property
    def dimension(self) -> int:
        return self.partition.dimension

    @property
    def output_dimension(self) -> int:
        first = self.terms[0].model if self.terms else self.tail.model
        return first.output_dimension

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(self._by_index)

    def term(self, index: int) -> Optional[Term]:
        return self._by_index.get(index)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Exactly one branch per point: the smallest region holding it, else the tail."""
        pts = as_points(points, self.dimension)
        if not np.all(np.isfinite(pts)):
            raise ValueError("Architopes are only evaluated at finite points.")
        out = np.zeros((pts.shape[0], self.output_dimension))
        located = self.partition.locate_batch(pts)
        for term in self.terms:
            hit = located == term.index
            if hit.any():
                out[hit] = term.scale * term.model.evaluate(pts[hit])
        outside = located == 0
        if self.tail is not None and outside.any():
            out[outside] = self.tail.scale * self.tail.model.evaluate(pts[outside])
        return out

    def as_handle(self, label: str = "architope") -> FunctionHandle:
        return FunctionHandle(
            evaluate=self.evaluate,
            output_dimension=self.output_dimension,
            label=label,
            dimension=self.dimension,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "partition": self.partition.to_dict(),
            "p": self.p,
            "terms": [term.to_dict() for term in self.terms],
            "tail": self.tail.to_dict() if self.tail else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Architope":
        from architope.services.learners import model_from_dict

        tail = data.get("tail")
        return cls(
            partition=Partition.from_dict(data["partition"]),
            terms=tuple(
                Term(int(item["index"]), float(item["scale"]), model_from_dict(item["model"]))
                for item in data["terms"]
            ),
            tail=Tail(float(tail["scale"]), model_from_dict(tail["model"])) if tail else None,
            p=float(data.get("p", 2.0)),
        )


__all__ = ["Term", "Tail", "Architope"]
