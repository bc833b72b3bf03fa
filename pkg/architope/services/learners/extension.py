"""
Extension by zero: a model fitted on K_n, read as a function on all of R^d.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

from architope.models.function import FunctionHandle
from architope.models.partition import Region, as_points


class BaseModel(Protocol):
    dimension: int
    output_dimension: int

    def evaluate(self, points: np.ndarray) -> np.ndarray: ...


def extend_by_zero(model: BaseModel, region: Region) -> FunctionHandle:
    """x -> model(x) on K_n and the zero vector elsewhere."""
    if model.dimension != region.dimension:
        raise ValueError(f"Model dimension {model.dimension} does not match K_{region.index}.")

    def evaluate(points: np.ndarray) -> np.ndarray:
        pts = as_points(points, region.dimension)
        out = np.zeros((pts.shape[0], model.output_dimension))
        inside = region.membership(pts)
        if inside.any():
            out[inside] = model.evaluate(pts[inside])
        return out

    return FunctionHandle(
        evaluate=evaluate,
        output_dimension=model.output_dimension,
        label=f"Z_{region.index}(model)",
        dimension=region.dimension,
    )


__all__ = ["BaseModel", "extend_by_zero"]
