"""Tests for voxelization, duplicate merging and box normalization."""

import itertools

import numpy as np
import pytest

from pcqa.exceptions import DataError, DegenerateInputError
from pcqa.models.cloud import BoundingBox, PointCloud
from pcqa.services.preprocess import (
    bounding_box,
    normalize_to_box,
    quantize_and_dedup,
    round_half_away,
    translate,
    union_box,
)

UNIT_CUBE = np.array(list(itertools.product((0.0, 1.0), repeat=3)))


class TestQuantize:
    """Test rounding and duplicate merging."""

    def test_round_half_away_from_zero(self):
        """Test halves round away from zero."""
        assert round_half_away(np.array([0.5, 1.5, 2.5, -0.5, 0.49])).tolist() == [1.0, 2.0, 3.0, -1.0, 0.0]

    def test_rounding_splits_points(self):
        """Test 0.4 and 0.6 land in different voxels."""
        cloud = quantize_and_dedup(PointCloud(positions=[[0.4, 0, 0], [0.6, 0, 0]]))
        assert cloud.positions.tolist() == [[0, 0, 0], [1, 0, 0]]

    def test_duplicate_colors_are_averaged(self):
        """Test black and white merged into one voxel average to mid gray."""
        cloud = quantize_and_dedup(
            PointCloud(positions=[[0.4, 0, 0], [0.4, 0, 0]], colors=[[0, 0, 0], [255, 255, 255]])
        )
        assert len(cloud) == 1
        assert cloud.positions.tolist() == [[0, 0, 0]]
        assert cloud.colors.tolist() == [[128, 128, 128]]

    def test_clean_cloud_unchanged(self):
        """Test an integer cloud without duplicates comes back identical."""
        cloud = PointCloud(positions=[[3, 1, 2], [0, 0, 0], [5, 5, 5]], colors=[[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert quantize_and_dedup(cloud) == cloud

    def test_clean_cloud_keeps_normals(self):
        """Test normals of an already-clean cloud pass through bit for bit."""
        cloud = PointCloud(positions=[[0, 0, 0], [1, 0, 0]], normals=[[0, 0, 1], [0.6, 0.8, 0]])
        assert quantize_and_dedup(cloud) == cloud

    def test_merged_normals_are_renormalized(self):
        """Test normals of merged points average to a unit vector."""
        cloud = quantize_and_dedup(
            PointCloud(positions=[[0.2, 0, 0], [0.1, 0, 0], [3, 0, 0]], normals=[[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        )
        s = 1.0 / np.sqrt(2.0)
        assert cloud.normals.tolist() == pytest.approx([[s, s, 0.0], [0.0, 0.0, 1.0]])

    def test_opposite_normals_keep_the_first(self):
        """Test a voxel whose normals cancel keeps the first occurrence's normal."""
        cloud = quantize_and_dedup(PointCloud(positions=[[1, 1, 1], [1, 1, 1]], normals=[[0, 0, -1], [0, 0, 1]]))
        assert cloud.normals.tolist() == [[0.0, 0.0, -1.0]]

    def test_normalize_keeps_normals(self):
        """Test box normalization does not drop normals."""
        cloud = PointCloud(positions=[[0, 0, 0], [10, 0, 0]], normals=[[0, 1, 0], [0, 1, 0]])
        out = normalize_to_box(cloud, BoundingBox.from_size((100, 100, 100)))
        assert out.normals.tolist() == [[0.0, 1.0, 0.0], [0.0, 1.0, 0.0]]

    def test_idempotent(self, rng):
        """Test quantizing twice equals quantizing once."""
        cloud = PointCloud(positions=rng.uniform(0, 20, size=(500, 3)), colors=rng.integers(0, 256, (500, 3)))
        once = quantize_and_dedup(cloud)
        assert quantize_and_dedup(once) == once

    def test_first_occurrence_order(self):
        """Test survivors keep the order of their first occurrence."""
        cloud = PointCloud(positions=[[5, 0, 0], [1, 0, 0], [5.2, 0, 0], [0, 0, 0]])
        assert quantize_and_dedup(cloud).positions[:, 0].tolist() == [5, 1, 0]

    def test_out_of_range_coordinates(self):
        """Test coordinates beyond the bit depth are rejected."""
        with pytest.raises(DataError, match="normalize"):
            quantize_and_dedup(PointCloud(positions=[[0, 0, 1024]], bit_depth=10))
        with pytest.raises(DataError):
            quantize_and_dedup(PointCloud(positions=[[-1, 0, 0]]))


class TestBoxes:
    """Test bounding and union boxes."""

    def test_single_point_box(self):
        """Test a one-point cloud has a zero-extent box."""
        box = bounding_box(PointCloud(positions=[[1, 2, 3]]))
        assert box.min_corner == (1.0, 2.0, 3.0)
        assert box.max_corner == (1.0, 2.0, 3.0)

    def test_two_point_box(self):
        """Test componentwise min and max."""
        box = bounding_box(PointCloud(positions=[[0, 0, 0], [5, 1, 2]]))
        assert box == BoundingBox((0, 0, 0), (5, 1, 2))

    def test_union(self):
        """Test the union contains both boxes."""
        box = union_box(BoundingBox((0, 0, 0), (1, 1, 1)), BoundingBox((2, 2, 2), (3, 3, 3)))
        assert box == BoundingBox((0, 0, 0), (3, 3, 3))

    def test_empty_cloud(self):
        """Test the box of an empty cloud is undefined."""
        with pytest.raises(DegenerateInputError):
            bounding_box(PointCloud(positions=np.empty((0, 3))))

    def test_inverted_box(self):
        """Test max below min is rejected."""
        with pytest.raises(DataError):
            BoundingBox((1, 0, 0), (0, 1, 1))


class TestNormalize:
    """Test normalization into a target box."""

    def test_unit_cube_scaled_by_smallest_ratio(self):
        """Test the unit cube is scaled by 400 on every axis for a 600x1000x400 box."""
        cloud = normalize_to_box(PointCloud(positions=UNIT_CUBE), BoundingBox.from_size((600, 1000, 400)))
        assert bounding_box(cloud) == BoundingBox((0, 0, 0), (400, 400, 400))
        assert len(cloud) == 8

    def test_output_fits_target(self, rng):
        """Test the normalized cloud lies inside the target on every axis."""
        target = BoundingBox.from_size((600, 1000, 400))
        cloud = PointCloud(positions=rng.normal(size=(300, 3)) * [3.0, 1.0, 7.0])
        normalized = normalize_to_box(cloud, target)
        assert target.contains(normalized.positions)

    def test_cloud_equal_to_target(self):
        """Test a cloud already spanning the target is unchanged up to rounding."""
        positions = UNIT_CUBE * [600, 1000, 400]
        cloud = normalize_to_box(PointCloud(positions=positions), BoundingBox.from_size((600, 1000, 400)))
        assert cloud.positions.tolist() == positions.tolist()

    def test_single_point_is_degenerate(self):
        """Test one point cannot be normalized."""
        with pytest.raises(DegenerateInputError):
            normalize_to_box(PointCloud(positions=[[1, 1, 1]]), BoundingBox.from_size((600, 1000, 400)))

    def test_translate_keeps_colors(self):
        """Test translation moves positions only."""
        cloud = PointCloud(positions=[[0, 0, 0]], colors=[[9, 9, 9]])
        moved = translate(cloud, (1, 2, 3))
        assert moved.positions.tolist() == [[1, 2, 3]]
        assert moved.colors.tolist() == [[9, 9, 9]]
