from .partition_service import (
    OUTSIDE,
    PartitionCheck,
    locate,
    make_shell_partition,
    overlap_mass,
    region_mass,
    uncovered_boxes,
    validate_partition,
)

__all__ = [
    "OUTSIDE",
    "PartitionCheck",
    "locate",
    "make_shell_partition",
    "overlap_mass",
    "region_mass",
    "uncovered_boxes",
    "validate_partition",
]
