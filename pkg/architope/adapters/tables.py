"""
Sampled functions loaded from CSV tables.

A table has a header row and columns x_1..x_d followed by one or more value
columns. One-dimensional tables are interpolated linearly; higher-dimensional
tables use the nearest tabulated node. Both are an approximation layer over
the sampled data.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy.interpolate import NearestNDInterpolator, interp1d

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampledTable:
    nodes: np.ndarray  # (m, d)
    values: np.ndarray  # (m, k)
    source: str

    @property
    def dimension(self) -> int:
        return self.nodes.shape[1]

    @property
    def value_columns(self) -> int:
        return self.values.shape[1]

    def interpolator(self, fill_value: Optional[float] = None):
        """
        Vectorised evaluator (n, d) -> (n, k).

        With `fill_value` None, 1-d lookups outside the table clamp to the edge
        samples; otherwise they return `fill_value`. Nearest-node lookups in
        d >= 2 return `fill_value` outside the bounding box of the nodes when it
        is given.
        """
        if self.dimension == 1:
            order = np.argsort(self.nodes[:, 0], kind="stable")
            xs, ys = self.nodes[order, 0], self.values[order]
            if fill_value is None:
                fill = (ys[0], ys[-1])
            else:
                fill = (np.full(ys.shape[1], fill_value), np.full(ys.shape[1], fill_value))
            linear = interp1d(xs, ys, axis=0, kind="linear", bounds_error=False, fill_value=fill)
            return lambda pts: np.asarray(linear(np.asarray(pts)[:, 0])).reshape(-1, ys.shape[1])

        nearest = NearestNDInterpolator(self.nodes, self.values)
        lo, hi = self.nodes.min(axis=0), self.nodes.max(axis=0)

        def evaluate(pts: np.ndarray) -> np.ndarray:
            out = np.asarray(nearest(pts)).reshape(-1, self.values.shape[1])
            if fill_value is not None:
                outside = np.any((pts < lo) | (pts > hi), axis=1)
                out[outside] = fill_value
            return out

        return evaluate


def load_table(path: Union[str, Path], dimension: int) -> SampledTable:
    """Read a CSV table whose first `dimension` columns are coordinates."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Table {path} does not exist.")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] <= dimension:
        raise ValueError(f"Table {path} needs {dimension} coordinate columns plus values; got {data.shape[1]} columns.")
    if not np.all(np.isfinite(data)):
        raise ValueError(f"Table {path} contains non-finite entries.")
    logger.info("Loaded table %s (%d rows, d=%d)", path, data.shape[0], dimension)
    return SampledTable(nodes=data[:, :dimension], values=data[:, dimension:], source=str(path))


__all__ = ["SampledTable", "load_table"]
