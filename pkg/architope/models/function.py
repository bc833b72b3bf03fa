"""
Function handles f: R^d -> R^D evaluated on batches of points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .partition import Region, as_points

BatchFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FunctionHandle:
    evaluate: BatchFn  # (n, d) -> (n, D)
    output_dimension: int
    label: str
    dimension: int = 1

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = as_points(points, self.dimension)
        values = np.asarray(self.evaluate(pts), dtype=float)
        return values.reshape(pts.shape[0], self.output_dimension)

    def minus(self, other: "FunctionHandle") -> "FunctionHandle":
        check_compatible(self, other)
        return FunctionHandle(
            evaluate=lambda pts: self(pts) - other(pts),
            output_dimension=self.output_dimension,
            label=f"({self.label})-({other.label})",
            dimension=self.dimension,
        )

    def scaled(self, factor: float) -> "FunctionHandle":
        return FunctionHandle(
            evaluate=lambda pts: factor * self(pts),
            output_dimension=self.output_dimension,
            label=f"{factor:g}*({self.label})",
            dimension=self.dimension,
        )

    @classmethod
    def constant(
        cls,
        value: Union[float, Sequence[float]],
        dimension: int = 1,
        label: str = "",
    ) -> "FunctionHandle":
        vector = np.atleast_1d(np.asarray(value, dtype=float))
        return cls(
            evaluate=lambda pts: np.broadcast_to(vector, (pts.shape[0], vector.size)).copy(),
            output_dimension=vector.size,
            label=label or f"const{vector.tolist()}",
            dimension=dimension,
        )

    @classmethod
    def zero(cls, dimension: int = 1, output_dimension: int = 1) -> "FunctionHandle":
        return cls.constant(np.zeros(output_dimension), dimension=dimension, label="zero")

    @classmethod
    def indicator(cls, region: Region, value: float = 1.0) -> "FunctionHandle":
        return cls(
            evaluate=lambda pts: (value * region.membership(pts)).reshape(-1, 1),
            output_dimension=1,
            label=f"{value:g}*I[K_{region.index}]",
            dimension=region.dimension,
        )


def check_compatible(f: FunctionHandle, g: FunctionHandle) -> None:
    if f.output_dimension != g.output_dimension:
        raise ValueError(
            f"Output dimensions differ: {f.label} has {f.output_dimension}, {g.label} has {g.output_dimension}."
        )
    if f.dimension != g.dimension:
        raise ValueError(f"Input dimensions differ: {f.dimension} vs {g.dimension}.")


__all__ = ["FunctionHandle", "BatchFn", "check_compatible"]
