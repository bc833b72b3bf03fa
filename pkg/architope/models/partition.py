"""
Partition Data Models

Axis-aligned boxes, box-minus-box regions K_n and ordered partitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np


def _as_points(points: np.ndarray, dimension: int) -> np.ndarray:
    array = np.asarray(points, dtype=float)
    if array.ndim == 0:
        array = array.reshape(1, 1)
    elif array.ndim == 1:
        array = array.reshape(1, -1) if array.shape[0] == dimension else array.reshape(-1, 1)
    if array.shape[1] != dimension:
        raise ValueError(f"Expected points of dimension {dimension}, got shape {array.shape}.")
    return array


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box [lo_1, hi_1] x ... x [lo_d, hi_d]."""
    lo: Tuple[float, ...]
    hi: Tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))
        if len(self.lo) != len(self.hi) or not self.lo:
            raise ValueError("Box bounds must be non-empty and of equal length.")
        if not all(np.isfinite(self.lo)) or not all(np.isfinite(self.hi)):
            raise ValueError("Box bounds must be finite.")
        if any(h < l for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"Box has lo > hi: {self.lo} / {self.hi}.")

    @classmethod
    def cube(cls, half_width: float, dimension: int) -> "Box":
        return cls((-half_width,) * dimension, (half_width,) * dimension)

    @property
    def dimension(self) -> int:
        return len(self.lo)

    @property
    def sides(self) -> np.ndarray:
        return np.asarray(self.hi) - np.asarray(self.lo)

    @property
    def volume(self) -> float:
        return float(np.prod(self.sides))

    @property
    def is_degenerate(self) -> bool:
        return bool(np.any(self.sides <= 0.0))

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = _as_points(points, self.dimension)
        return np.all((pts >= np.asarray(self.lo)) & (pts <= np.asarray(self.hi)), axis=1)

    def contains_interior(self, points: np.ndarray) -> np.ndarray:
        pts = _as_points(points, self.dimension)
        return np.all((pts > np.asarray(self.lo)) & (pts < np.asarray(self.hi)), axis=1)

    def strictly_inside(self, other: "Box") -> bool:
        """True when this box lies in the interior of `other`."""
        return all(ol < l and h < oh for l, h, ol, oh in zip(self.lo, self.hi, other.lo, other.hi))

    def intersect(self, other: "Box") -> Optional["Box"]:
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(h <= l for l, h in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def subtract(self, other: "Box") -> List["Box"]:
        """
        Split `self - other` into at most 2d boxes that overlap only on faces.

        Pieces of zero volume are dropped.
        """
        overlap = self.intersect(other)
        if overlap is None:
            return [] if self.is_degenerate else [self]

        pieces: List[Box] = []
        lo, hi = list(self.lo), list(self.hi)
        for axis in range(self.dimension):
            if lo[axis] < overlap.lo[axis]:
                piece_hi = list(hi)
                piece_hi[axis] = overlap.lo[axis]
                pieces.append(Box(tuple(lo), tuple(piece_hi)))
                lo[axis] = overlap.lo[axis]
            if overlap.hi[axis] < hi[axis]:
                piece_lo = list(lo)
                piece_lo[axis] = overlap.hi[axis]
                pieces.append(Box(tuple(piece_lo), tuple(hi)))
                hi[axis] = overlap.hi[axis]
        return [piece for piece in pieces if not piece.is_degenerate]

    def to_dict(self) -> Dict[str, List[float]]:
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Box":
        return cls(tuple(data["lo"]), tuple(data["hi"]))


@dataclass(frozen=True)
class Region:
    """Compact region K_n = outer minus the open box inner."""
    outer: Box
    index: int
    inner: Optional[Box] = None

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"Region index must be positive, got {self.index}.")
        if self.outer.is_degenerate:
            raise ValueError(f"Region K_{self.index} has a degenerate outer box.")
        if self.inner is not None:
            if self.inner.dimension != self.outer.dimension:
                raise ValueError(f"Region K_{self.index} mixes dimensions.")
            if not self.inner.strictly_inside(self.outer):
                raise ValueError(f"Region K_{self.index}: inner box must lie in the interior of outer.")

    @property
    def dimension(self) -> int:
        return self.outer.dimension

    def membership(self, points: np.ndarray) -> np.ndarray:
        inside = self.outer.contains(points)
        if self.inner is not None:
            inside &= ~self.inner.contains_interior(points)
        return inside

    def cells(self) -> List[Box]:
        """Disjoint-up-to-faces boxes whose union is the region."""
        if self.inner is None:
            return [self.outer]
        return self.outer.subtract(self.inner)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"index": self.index, "outer": self.outer.to_dict()}
        if self.inner is not None:
            data["inner"] = self.inner.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Region":
        inner = data.get("inner")
        return cls(
            outer=Box.from_dict(data["outer"]),
            index=int(data["index"]),
            inner=Box.from_dict(inner) if inner else None,
        )


@dataclass(frozen=True)
class Partition:
    """Ordered regions K_1..K_N of R^d."""
    regions: Tuple[Region, ...]
    dimension: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "regions", tuple(self.regions))
        if not self.regions:
            raise ValueError("A partition needs at least one region.")
        for position, region in enumerate(self.regions, start=1):
            if region.index != position:
                raise ValueError(f"Region indices must run 1..N in order; found {region.index} at {position}.")
            if region.dimension != self.dimension:
                raise ValueError(f"Region K_{region.index} has dimension {region.dimension}, expected {self.dimension}.")

    def __len__(self) -> int:
        return len(self.regions)

    def region(self, index: int) -> Region:
        if not 1 <= index <= len(self.regions):
            raise IndexError(f"Region index {index} outside 1..{len(self.regions)}.")
        return self.regions[index - 1]

    def bounding_box(self, count: Optional[int] = None) -> Box:
        if count is None:
            count = len(self.regions)
        if not 1 <= count <= len(self.regions):
            raise ValueError(f"count must lie in 1..{len(self.regions)}, got {count}.")
        selected = self.regions[:count]
        lo = np.min([r.outer.lo for r in selected], axis=0)
        hi = np.max([r.outer.hi for r in selected], axis=0)
        return Box(tuple(lo), tuple(hi))

    def locate_batch(self, points: np.ndarray) -> np.ndarray:
        """Smallest region index containing each point; 0 marks points outside every region."""
        pts = _as_points(points, self.dimension)
        located = np.zeros(pts.shape[0], dtype=int)
        for region in self.regions:
            pending = located == 0
            if not pending.any():
                break
            hit = np.zeros_like(pending)
            hit[pending] = region.membership(pts[pending])
            located[hit] = region.index
        return located

    def to_dict(self) -> Dict[str, Any]:
        return {"dimension": self.dimension, "regions": [r.to_dict() for r in self.regions]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Partition":
        return cls(
            regions=tuple(Region.from_dict(item) for item in data["regions"]),
            dimension=int(data["dimension"]),
        )


def as_points(points: np.ndarray, dimension: int) -> np.ndarray:
    return _as_points(points, dimension)


def boxes_of(regions: Sequence[Region]) -> List[Box]:
    return [cell for region in regions for cell in region.cells()]


__all__ = ["Box", "Region", "Partition", "as_points", "boxes_of"]
