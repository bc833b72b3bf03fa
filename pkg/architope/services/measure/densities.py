"""
Named reference densities.

Config strings such as "lebesgue", "gaussian(0.7)" or "exp-decay(1)" resolve
to a MeasureSpec; "table" resolves to a density tabulated in a CSV file.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

import numpy as np

from architope.adapters.tables import load_table
from architope.models.measure import MeasureSpec
from architope.services.errors import ValidationError
from architope.utils.helper_functions import parse_call, unknown_name_message


def lebesgue(dimension: int) -> MeasureSpec:
    return MeasureSpec(
        dimension=dimension,
        density=lambda pts: np.ones(pts.shape[0]),
        label="lebesgue",
    )


def gaussian(dimension: int, sigma: float = 1.0) -> MeasureSpec:
    """Centred isotropic normal density with standard deviation sigma."""
    if sigma <= 0:
        raise ValidationError(f"gaussian sigma must be positive, got {sigma}.")
    norm = (2.0 * math.pi * sigma**2) ** (-dimension / 2.0)
    return MeasureSpec(
        dimension=dimension,
        density=lambda pts: norm * np.exp(-np.sum(pts**2, axis=1) / (2.0 * sigma**2)),
        label=f"gaussian({sigma:g})",
    )


def exp_decay(dimension: int, rate: float = 1.0) -> MeasureSpec:
    """Density exp(-rate * ||x||_1)."""
    if rate <= 0:
        raise ValidationError(f"exp-decay rate must be positive, got {rate}.")
    return MeasureSpec(
        dimension=dimension,
        density=lambda pts: np.exp(-rate * np.sum(np.abs(pts), axis=1)),
        label=f"exp-decay({rate:g})",
    )


def tabulated(dimension: int, path: Union[str, Path]) -> MeasureSpec:
    try:
        table = load_table(path, dimension)
    except (OSError, ValueError) as exc:
        raise ValidationError(f"measure.table: {exc}") from exc
    if table.value_columns != 1:
        raise ValidationError(f"Density table {path} must have exactly one density column.")
    if np.any(table.values < 0):
        raise ValidationError(f"Density table {path} has negative densities.")
    lookup = table.interpolator(fill_value=0.0)
    return MeasureSpec(
        dimension=dimension,
        density=lambda pts: lookup(pts)[:, 0],
        label=f"table({Path(path).name})",
    )


_BUILDERS: Dict[str, Callable[..., MeasureSpec]] = {
    "lebesgue": lebesgue,
    "gaussian": gaussian,
    "exp-decay": exp_decay,
}


def known_densities() -> List[str]:
    return sorted([*_BUILDERS, "table"])


def parse_density(spec: str, dimension: int, table_path: Optional[Union[str, Path]] = None) -> MeasureSpec:
    try:
        name, args = parse_call(spec)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc

    if name == "table":
        if table_path is None:
            raise ValidationError("Density 'table' needs a CSV path.")
        return tabulated(dimension, table_path)

    builder = _BUILDERS.get(name)
    if builder is None:
        raise ValidationError(unknown_name_message("density", name, known_densities()))
    try:
        params = [float(arg) for arg in args]
    except ValueError as exc:
        raise ValidationError(f"Density '{spec}' has non-numeric parameters.") from exc
    if name == "lebesgue" and params:
        raise ValidationError("lebesgue takes no parameters.")
    if len(params) > 1:
        raise ValidationError(f"Density '{name}' takes at most one parameter.")
    return builder(dimension, *params)


__all__ = ["lebesgue", "gaussian", "exp_decay", "tabulated", "known_densities", "parse_density"]
