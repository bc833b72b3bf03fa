"""
Built-in sequence families for the strict convergence diagnostic.

Each family is a list f_1..f_length of indicator combinations together with
the target they are measured against (I_{K_1} for all of them).
"""

from __future__ import annotations

from typing import Callable, Dict, List, Tuple

import numpy as np

from architope.models.function import FunctionHandle
from architope.models.partition import Partition
from architope.services.errors import PreconditionError, ValidationError
from architope.utils.helper_functions import unknown_name_message

Family = Tuple[List[FunctionHandle], FunctionHandle]


def _combination(partition: Partition, coefficients: Dict[int, float], label: str) -> FunctionHandle:
    regions = [(partition.region(n), c) for n, c in sorted(coefficients.items()) if c != 0]

    def evaluate(pts: np.ndarray) -> np.ndarray:
        out = np.zeros(pts.shape[0])
        for region, c in regions:
            out += c * region.membership(pts)
        return out.reshape(-1, 1)

    return FunctionHandle(evaluate=evaluate, output_dimension=1, label=label, dimension=partition.dimension)


def shrinking_on_k1(partition: Partition, k: int) -> FunctionHandle:
    """(1 - 1/k) I_{K_1}: converges to I_{K_1} with support inside K_1."""
    return _combination(partition, {1: 1.0 - 1.0 / k}, f"(1-1/{k})I[K_1]")


def leaking_to_k2(partition: Partition, k: int) -> FunctionHandle:
    """I_{K_1} + (1/k) I_{K_2}: L^p-close to the target, never supported in K_1."""
    return _combination(partition, {1: 1.0, 2: 1.0 / k}, f"I[K_1]+(1/{k})I[K_2]")


def wrong_support(partition: Partition, k: int) -> FunctionHandle:
    return _combination(partition, {2: 1.0}, "I[K_2]")


def stalled(partition: Partition, k: int) -> FunctionHandle:
    return _combination(partition, {1: 0.5}, "0.5*I[K_1]")


def escaping_mass(partition: Partition, k: int) -> FunctionHandle:
    """
    I_{K_1} + I_{K_(k+1)}: the local metric to I_{K_1} tends to zero while the
    L^p distance does not. The moving region stops at the last K_N.
    """
    n = min(k + 1, len(partition))
    return _combination(partition, {1: 1.0, n: 1.0}, f"I[K_1]+I[K_{n}]")


_FAMILIES: Dict[str, Callable[[Partition, int], FunctionHandle]] = {
    "shrinking-on-k1": shrinking_on_k1,
    "leaking-to-k2": leaking_to_k2,
    "wrong-support": wrong_support,
    "stalled": stalled,
    "escaping-mass": escaping_mass,
}


def known_families() -> List[str]:
    return sorted(_FAMILIES)


def build_family(name: str, partition: Partition, length: int) -> Family:
    key = name.strip().lower()
    if key not in _FAMILIES:
        raise ValidationError(unknown_name_message("sequence family", name, known_families()))
    if length < 1:
        raise ValidationError(f"Sequence length must be positive, got {length}.")
    if len(partition) < 2:
        raise PreconditionError("Sequence families need a partition with at least two regions.")
    builder = _FAMILIES[key]
    sequence = [builder(partition, k) for k in range(1, length + 1)]
    target = FunctionHandle.indicator(partition.region(1))
    return sequence, target


__all__ = [
    "Family",
    "known_families",
    "build_family",
    "shrinking_on_k1",
    "leaking_to_k2",
    "wrong_support",
    "stalled",
    "escaping_mass",
]
