import numpy as np
import pytest

from architope.models.measure import MeasureSpec
from architope.models.partition import Box, Partition, Region
from architope.services.errors import AssumptionViolation, ValidationError
from architope.services.partition import (
    OUTSIDE,
    locate,
    make_shell_partition,
    region_mass,
    uncovered_boxes,
    validate_partition,
)


def test_locate_uses_smallest_index_on_boundaries(shells):
    assert locate(shells, 0.5) == 1
    assert locate(shells, 1.0) == 1
    assert locate(shells, -1.0) == 1
    assert locate(shells, 1.5) == 2
    assert locate(shells, 7.25) == 8
    assert locate(shells, 100.0) is OUTSIDE


def test_locate_rejects_non_finite_points(shells):
    with pytest.raises(ValidationError):
        locate(shells, np.nan)


def test_locate_batch_in_the_plane(plane_shells):
    points = np.array([[0.0, 0.0], [1.5, 0.0], [0.2, -3.9], [5.0, 5.0]])
    assert plane_shells.locate_batch(points).tolist() == [1, 2, 4, 0]


@pytest.mark.parametrize("width", [0.0, -1.0])
def test_shell_width_must_be_positive(width):
    with pytest.raises(ValidationError):
        make_shell_partition(1, 4, width)


def test_shell_partition_is_valid(shells, leb, quad):
    check = validate_partition(shells, leb, quad)
    assert check.ok
    assert check.masses == pytest.approx([2.0] * 8)
    assert check.uncovered_mass == pytest.approx(0.0, abs=1e-12)


def test_overlapping_regions_are_reported(leb, quad):
    partition = Partition(
        regions=(Region(Box((-1.0,), (1.0,)), 1), Region(Box((0.0,), (2.0,)), 2)),
        dimension=1,
    )
    check = validate_partition(partition, leb, quad)
    assert not check.ok
    assert check.overlaps[0][:2] == (1, 2)
    assert check.overlaps[0][2] == pytest.approx(1.0)


def test_uncovered_gap_is_measured(leb, quad):
    partition = Partition(
        regions=(Region(Box((-1.0,), (0.0,)), 1), Region(Box((0.5,), (1.0,)), 2)),
        dimension=1,
    )
    gaps = uncovered_boxes(partition)
    assert [(g.lo, g.hi) for g in gaps] == [((0.0,), (0.5,))]
    check = validate_partition(partition, leb, quad)
    assert check.uncovered_mass == pytest.approx(0.5)
    assert not check.ok


def test_zero_mass_region_violates_assumption(shells, quad):
    inside_k1 = MeasureSpec(dimension=1, density=lambda pts: (np.abs(pts[:, 0]) <= 1.0).astype(float), label="k1-only")
    assert region_mass(shells, 1, inside_k1, quad) == pytest.approx(2.0)
    with pytest.raises(AssumptionViolation) as info:
        region_mass(shells, 2, inside_k1, quad)
    assert info.value.index == 2


def test_shell_regions_subtract_the_inner_cube(plane_shells):
    k2 = plane_shells.region(2)
    assert sum(cell.volume for cell in k2.cells()) == pytest.approx(12.0)
    assert k2.membership(np.array([[0.0, 0.0]])).tolist() == [False]
    assert k2.membership(np.array([[1.0, 0.0]])).tolist() == [True]


def test_partition_json_round_trip(plane_shells):
    again = Partition.from_dict(plane_shells.to_dict())
    assert again == plane_shells


def test_region_indices_must_be_in_order():
    with pytest.raises(ValueError):
        Partition(regions=(Region(Box((0.0,), (1.0,)), 2),), dimension=1)


def test_bounding_box_of_the_leading_regions(shells):
    assert shells.bounding_box(3) == Box((-3.0,), (3.0,))
    assert shells.bounding_box() == Box((-8.0,), (8.0,))
    with pytest.raises(ValueError):
        shells.bounding_box(0)
    with pytest.raises(ValueError):
        shells.bounding_box(9)
