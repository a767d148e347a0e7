"""Tests for exact nearest-neighbour search."""

import itertools

import numpy as np
import pytest

from pcqa.exceptions import DataError, DegenerateInputError
from pcqa.services.spatial_index import build_index, k_nearest, k_nearest_batch, nearest, nearest_batch

CUBE = np.array(list(itertools.product((0.0, 1.0), repeat=3)))


def brute_nearest(points: np.ndarray, query: np.ndarray) -> tuple[int, float]:
    d2 = np.sum((points - query) ** 2, axis=1)
    best = d2.min()
    return int(np.flatnonzero(d2 == best)[0]), float(best)


class TestNearest:
    """Test single nearest-neighbour queries."""

    def test_single_point(self):
        """Test a one-point index answers that point for any query."""
        index = build_index([[1, 2, 3]])
        assert nearest(index, [100, -4, 0.5])[0] == 0

    def test_query_on_indexed_point(self):
        """Test the distance to an indexed point is zero."""
        index = build_index(CUBE)
        point_id, d2 = nearest(index, CUBE[5])
        assert point_id == 5
        assert d2 == 0.0

    def test_cube_corner(self):
        """Test a query near the origin corner."""
        point_id, d2 = nearest(build_index(CUBE), [0.1, 0, 0])
        assert point_id == 0
        assert d2 == pytest.approx(0.01, abs=1e-15)

    def test_ties_go_to_smallest_id(self):
        """Test equidistant points resolve to the smallest id."""
        index = build_index([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])
        ids, _ = nearest_batch(index, [[0, 0, 0]])
        assert ids.tolist() == [0]

    def test_duplicate_points(self):
        """Test duplicates resolve to the first copy."""
        index = build_index([[2, 2, 2], [0, 0, 0], [0, 0, 0]])
        assert nearest(index, [0, 0, 0.1])[0] == 1

    def test_matches_linear_scan(self, rng):
        """Test random queries against an exhaustive scan."""
        points = rng.integers(0, 12, size=(200, 3)).astype(float)
        queries = rng.integers(0, 12, size=(50, 3)) + rng.choice([0.0, 0.5], size=(50, 3))
        ids, d2 = nearest_batch(build_index(points), queries)
        for q, i, d in zip(queries, ids, d2):
            assert (int(i), float(d)) == brute_nearest(points, q)

    def test_empty_query_batch(self):
        """Test an empty batch returns empty arrays."""
        ids, d2 = nearest_batch(build_index(CUBE), np.empty((0, 3)))
        assert ids.shape == (0,)
        assert d2.shape == (0,)


class TestBuildIndex:
    """Test index construction errors."""

    def test_empty_input(self):
        """Test an empty point set cannot be indexed."""
        with pytest.raises(DegenerateInputError):
            build_index(np.empty((0, 3)))

    def test_non_finite(self):
        """Test NaN coordinates are rejected."""
        with pytest.raises(DataError):
            build_index([[0, 0, np.nan]])


class TestKNearest:
    """Test k-nearest-neighbour queries."""

    def test_sorted_by_distance_then_id(self):
        """Test neighbours come back by distance, ties by id."""
        index = build_index([[0, 0, 0], [2, 0, 0], [1, 0, 0], [-1, 0, 0]])
        ids, d2 = k_nearest(index, [0, 0, 0], 3)
        assert ids.tolist() == [0, 2, 3]
        assert d2.tolist() == [0.0, 1.0, 1.0]

    def test_matches_linear_scan(self, rng):
        """Test k=8 neighbours against a full sort."""
        points = rng.uniform(0, 10, size=(300, 3))
        queries = rng.uniform(0, 10, size=(20, 3))
        ids, _ = k_nearest_batch(build_index(points), queries, 8)
        for q, row in zip(queries, ids):
            d2 = np.sum((points - q) ** 2, axis=1)
            assert row.tolist() == np.lexsort((np.arange(len(points)), d2))[:8].tolist()

    def test_k_bounds(self):
        """Test k outside [1, min(64, N)] is rejected."""
        index = build_index(CUBE)
        with pytest.raises(DataError):
            k_nearest(index, [0, 0, 0], 0)
        with pytest.raises(DataError):
            k_nearest(index, [0, 0, 0], 9)


class TestGridTies:
    """Test tie resolution on integer grids, where equal distances are the norm."""

    @pytest.fixture
    def grid(self, rng) -> np.ndarray:
        """A shuffled 3x3x3 integer grid."""
        points = np.array(list(itertools.product(range(3), repeat=3)), dtype=np.float64)
        return points[rng.permutation(len(points))]

    @pytest.mark.parametrize("k", [1, 2, 6, 7, 19])
    def test_k_nearest_prefers_smallest_ids(self, grid, k):
        """Test every tied neighbourhood resolves to the smallest ids."""
        queries = np.array(list(itertools.product((0.0, 0.5, 1.0, 1.5, 2.0), repeat=3)))
        ids, d2 = k_nearest_batch(build_index(grid), queries, k)
        for q, row, row_d2 in zip(queries, ids, d2):
            full = np.sum((grid - q) ** 2, axis=1)
            expected = np.lexsort((np.arange(len(grid)), full))[:k]
            assert row.tolist() == expected.tolist()
            assert row_d2.tolist() == full[expected].tolist()

    def test_center_query(self, grid):
        """Test the six face neighbours of the center come back in id order."""
        ids, _ = k_nearest(build_index(grid), [1, 1, 1], 7)
        center = int(np.flatnonzero((grid == 1).all(axis=1))[0])
        faces = np.flatnonzero(np.sum((grid - 1.0) ** 2, axis=1) == 1.0)
        assert ids.tolist() == [center] + sorted(faces.tolist())

    def test_nearest_in_cell_centers(self, grid):
        """Test a query equidistant from eight corners picks the smallest id."""
        queries = np.array(list(itertools.product((0.5, 1.5), repeat=3)))
        ids, d2 = nearest_batch(build_index(grid), queries)
        for q, i, d in zip(queries, ids, d2):
            assert (int(i), float(d)) == brute_nearest(grid, q)
            assert d == 0.75

    def test_all_points_equidistant(self):
        """Test widening stops at the full point set when every point ties."""
        points = np.array([[0.0, 0.0, 5.0]] * 10 + [[0.0, 0.0, -5.0]] * 10)
        ids, d2 = k_nearest(build_index(points), [0, 0, 0], 2)
        assert ids.tolist() == [0, 1]
        assert d2.tolist() == [25.0, 25.0]
        assert nearest(build_index(points[::-1]), [0, 0, 0])[0] == 0
