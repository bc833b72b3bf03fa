"""
Named target functions for experiment configs.

    indicator(K_i[, b])  b * I_{K_i}
    exp-decay[(rate)]    exp(-rate * ||x||_1)
    gaussian[(sigma)]    exp(-||x||^2 / (2 sigma^2))
    sine[(freq)]         sin(freq * (x_1 + ... + x_d))
    abs                  ||x||_2
    zero                 0
    csv(path)            sampled table; linear in d = 1, nearest node in d >= 2
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

import numpy as np

from architope.adapters.tables import load_table
from architope.models.function import FunctionHandle
from architope.models.partition import Box, Partition
from architope.services.errors import ValidationError
from architope.utils.helper_functions import parse_call, unknown_name_message

logger = logging.getLogger(__name__)

_REGION_NAME = re.compile(r"^k_?(\d+)$", re.IGNORECASE)


def _floats(name: str, args: List[str], at_most: int) -> List[float]:
    if len(args) > at_most:
        raise ValidationError(f"Target '{name}' takes at most {at_most} parameter(s).")
    try:
        return [float(arg) for arg in args]
    except ValueError as exc:
        raise ValidationError(f"Target '{name}' has non-numeric parameters: {args}.") from exc


def exp_decay_target(dimension: int, rate: float = 1.0) -> FunctionHandle:
    return FunctionHandle(
        evaluate=lambda pts: np.exp(-rate * np.sum(np.abs(pts), axis=1)),
        output_dimension=1,
        label=f"exp-decay({rate:g})",
        dimension=dimension,
    )


def gaussian_target(dimension: int, sigma: float = 1.0) -> FunctionHandle:
    if sigma <= 0:
        raise ValidationError(f"gaussian sigma must be positive, got {sigma}.")
    return FunctionHandle(
        evaluate=lambda pts: np.exp(-np.sum(pts**2, axis=1) / (2.0 * sigma**2)),
        output_dimension=1,
        label=f"gaussian({sigma:g})",
        dimension=dimension,
    )


def sine_target(dimension: int, frequency: float = 1.0) -> FunctionHandle:
    return FunctionHandle(
        evaluate=lambda pts: np.sin(frequency * np.sum(pts, axis=1)),
        output_dimension=1,
        label=f"sine({frequency:g})",
        dimension=dimension,
    )


def abs_target(dimension: int) -> FunctionHandle:
    return FunctionHandle(
        evaluate=lambda pts: np.linalg.norm(pts, axis=1),
        output_dimension=1,
        label="abs",
        dimension=dimension,
    )


def csv_target(dimension: int, path: Union[str, Path]) -> FunctionHandle:
    try:
        table = load_table(path, dimension)
    except (OSError, ValueError) as exc:
        raise ValidationError(f"Cannot load target table: {exc}") from exc
    return FunctionHandle(
        evaluate=table.interpolator(),
        output_dimension=table.value_columns,
        label=f"csv({Path(path).name})",
        dimension=dimension,
    )


def _indicator(partition: Partition, args: List[str]) -> FunctionHandle:
    if not 1 <= len(args) <= 2:
        raise ValidationError("indicator takes a region name K_i and an optional height.")
    match = _REGION_NAME.match(args[0])
    if not match:
        raise ValidationError(f"Cannot read region name '{args[0]}'; use K_1, K_2, ...")
    index = int(match.group(1))
    if not 1 <= index <= len(partition):
        raise ValidationError(f"indicator region K_{index} outside 1..{len(partition)}.")
    height = _floats("indicator", args[1:], 1)
    return FunctionHandle.indicator(partition.region(index), height[0] if height else 1.0)


_ANALYTIC: Dict[str, Callable[..., FunctionHandle]] = {
    "exp-decay": exp_decay_target,
    "gaussian": gaussian_target,
    "sine": sine_target,
}


def exp_decay_tail(rate: float, p: float, box: Box) -> Optional[float]:
    """
    int of exp(-rate ||x||_1)^p dx outside a box symmetric about the origin,
    in closed form; None for boxes that are not symmetric.
    """
    lo, hi = np.asarray(box.lo), np.asarray(box.hi)
    if not np.allclose(lo, -hi):
        return None
    c = p * rate
    whole = (2.0 / c) ** box.dimension
    inside = float(np.prod(2.0 * (1.0 - np.exp(-c * hi)) / c))
    return whole - inside


def analytic_tail(spec: str, measure_label: str, p: float, box: Box) -> Optional[float]:
    """Closed-form L^p mass of the target beyond `box`, where one is known."""
    name, args = parse_call(spec)
    if name in ("zero", "indicator"):
        return 0.0
    if name == "exp-decay" and measure_label == "lebesgue":
        return exp_decay_tail(_floats(name, args, 1)[0] if args else 1.0, p, box)
    return None


def known_targets() -> List[str]:
    return sorted([*_ANALYTIC, "abs", "zero", "indicator", "csv"])


def parse_target(spec: str, partition: Partition, base_dir: Optional[Path] = None) -> FunctionHandle:
    """Resolve a config target string; relative CSV paths are read from `base_dir`."""
    try:
        name, args = parse_call(spec)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    dimension = partition.dimension

    if name == "indicator":
        return _indicator(partition, args)
    if name == "zero":
        _floats(name, args, 0)
        return FunctionHandle.zero(dimension)
    if name == "abs":
        _floats(name, args, 0)
        return abs_target(dimension)
    if name == "csv":
        if len(args) != 1:
            raise ValidationError("csv takes exactly one path.")
        path = Path(args[0])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return csv_target(dimension, path)

    builder = _ANALYTIC.get(name)
    if builder is None:
        raise ValidationError(unknown_name_message("target", name, known_targets()))
    return builder(dimension, *_floats(name, args, 1))


__all__ = [
    "exp_decay_target",
    "gaussian_target",
    "sine_target",
    "abs_target",
    "csv_target",
    "exp_decay_tail",
    "analytic_tail",
    "known_targets",
    "parse_target",
]
