"""Tests for normals, D1/D2 errors, geometry PSNR and YUV PSNR."""

import math

import numpy as np
import pytest

from pcqa.exceptions import DataError, DegenerateInputError, MissingAttributeError, UsageError
from pcqa.models.cloud import PointCloud
from pcqa.services.point_metrics import (
    color_error,
    d1_error,
    d2_error,
    estimate_normals,
    geometry_psnr,
    point_metric_rows,
    rgb_to_yuv,
    yuv_psnr,
)


def brute_d1(ref: np.ndarray, dist: np.ndarray) -> tuple[float, float, float, float]:
    """(forward_mse, backward_mse, forward_haus, backward_haus) by exhaustive scan."""
    d2 = np.sum((ref[:, None, :] - dist[None, :, :]) ** 2, axis=2)
    forward, backward = d2.min(axis=1), d2.min(axis=0)
    return forward.mean(), backward.mean(), forward.max(), backward.max()


def brute_matches(ref: np.ndarray, dist: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest ids both ways by exhaustive scan; argmin keeps the smallest id."""
    d2 = np.sum((ref[:, None, :] - dist[None, :, :]) ** 2, axis=2)
    return d2.argmin(axis=1), d2.argmin(axis=0)


def unit_rows(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def bt709(rgb: np.ndarray) -> np.ndarray:
    r, g, b = (rgb[:, c].astype(np.float64) for c in range(3))
    y = 0.2126 * r + 0.7152 * g + 0.0722 * b
    u = -0.1146 * r - 0.3854 * g + 0.5 * b + 128.0
    v = 0.5 * r - 0.4542 * g - 0.0458 * b + 128.0
    return np.column_stack([y, u, v])


class TestNormals:
    """Test PCA normal estimation."""

    def test_plane(self):
        """Test a planar grid gets normals along z."""
        xs, ys = np.meshgrid(np.arange(10.0), np.arange(10.0))
        cloud = PointCloud(positions=np.column_stack([xs.ravel(), ys.ravel(), np.zeros(100)]))
        normals = estimate_normals(cloud, k=8).normals
        assert np.allclose(np.abs(normals[:, 2]), 1.0, atol=1e-6)

    def test_sphere_normals_are_radial(self, make_sphere):
        """Test normals on a radius-100 sphere align with the radius."""
        center = (200.0, 200.0, 200.0)
        cloud = estimate_normals(make_sphere(n=2000, radius=100.0, center=center, colored=False), k=16)
        radial = cloud.positions - np.asarray(center)
        radial /= np.linalg.norm(radial, axis=1, keepdims=True)
        dots = np.einsum("ij,ij->i", cloud.normals, radial)
        assert np.all(np.abs(dots) >= 0.99)
        # Oriented away from the centroid
        assert np.all(dots > 0)

    def test_collinear_points_flagged(self):
        """Test a line gives unit normals orthogonal to it, flagged low-confidence."""
        cloud = estimate_normals(PointCloud(positions=[[0, 0, 0], [1, 1, 1], [2, 2, 2]]), k=2)
        direction = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
        assert np.allclose(np.linalg.norm(cloud.normals, axis=1), 1.0)
        assert np.allclose(cloud.normals @ direction, 0.0, atol=1e-9)
        assert cloud.low_confidence.all()

    def test_k_not_below_point_count(self):
        """Test k must be smaller than the point count."""
        with pytest.raises(DegenerateInputError):
            estimate_normals(PointCloud(positions=[[0, 0, 0], [1, 0, 0]]), k=2)

    def test_k_too_small(self):
        """Test k below two is rejected."""
        with pytest.raises(DataError):
            estimate_normals(PointCloud(positions=np.eye(3)), k=1)


class TestGeometryError:
    """Test point-to-point and point-to-plane errors."""

    def test_identity(self, sphere):
        """Test identical clouds have zero error everywhere."""
        err = d1_error(sphere, sphere)
        assert err.symmetric_mse == 0.0
        assert err.symmetric_haus == 0.0

    def test_three_four_five(self):
        """Test a single displaced pair gives 25 in every field."""
        err = d1_error(PointCloud(positions=[[0, 0, 0]]), PointCloud(positions=[[3, 4, 0]]))
        assert err.model_dump() == {
            "forward_mse": 25.0,
            "backward_mse": 25.0,
            "symmetric_mse": 25.0,
            "forward_haus": 25.0,
            "backward_haus": 25.0,
            "symmetric_haus": 25.0,
        }

    def test_d1_matches_exhaustive_scan(self, rng):
        """Test D1 against a brute-force oracle on random clouds."""
        ref = rng.uniform(0, 50, size=(100, 3))
        dist = rng.uniform(0, 50, size=(120, 3))
        err = d1_error(PointCloud(positions=ref), PointCloud(positions=dist))
        forward_mse, backward_mse, forward_haus, backward_haus = brute_d1(ref, dist)
        assert err.forward_mse == pytest.approx(forward_mse, rel=1e-12)
        assert err.backward_mse == pytest.approx(backward_mse, rel=1e-12)
        assert err.forward_haus == pytest.approx(forward_haus, rel=1e-12)
        assert err.backward_haus == pytest.approx(backward_haus, rel=1e-12)
        assert err.symmetric_mse == max(err.forward_mse, err.backward_mse)

    def test_symmetric_invariant_under_swap(self, rng):
        """Test swapping the arguments leaves the symmetric error unchanged."""
        a = PointCloud(positions=rng.uniform(0, 30, size=(80, 3)))
        b = PointCloud(positions=rng.uniform(0, 30, size=(60, 3)))
        assert d1_error(a, b).symmetric_mse == d1_error(b, a).symmetric_mse

    def test_d2_orthogonal_displacement(self):
        """Test a displacement perpendicular to the normal costs nothing."""
        normal = [[0.0, 0.0, 1.0]]
        ref = PointCloud(positions=[[0, 0, 0]], normals=normal)
        dist = PointCloud(positions=[[3, 4, 0]], normals=normal)
        err = d2_error(ref, dist)
        assert err.forward_mse == 0.0
        assert err.backward_mse == 0.0

    def test_d2_along_normal(self):
        """Test a displacement along the normal costs its squared length."""
        normal = [[0.0, 0.0, 1.0]]
        err = d2_error(
            PointCloud(positions=[[0, 0, 0]], normals=normal),
            PointCloud(positions=[[0, 0, 2]], normals=normal),
        )
        assert err.forward_mse == 4.0

    def test_d2_matches_exhaustive_scan(self, rng):
        """Test D2 against projections of brute-force matches on the source normals."""
        ref, dist = rng.uniform(0, 40, size=(90, 3)), rng.uniform(0, 40, size=(110, 3))
        ref_n, dist_n = unit_rows(rng, 90), unit_rows(rng, 110)
        forward_ids, backward_ids = brute_matches(ref, dist)
        forward = np.sum((dist[forward_ids] - ref) * ref_n, axis=1) ** 2
        backward = np.sum((ref[backward_ids] - dist) * dist_n, axis=1) ** 2

        err = d2_error(PointCloud(positions=ref, normals=ref_n), PointCloud(positions=dist, normals=dist_n))
        assert err.forward_mse == pytest.approx(forward.mean(), rel=1e-12)
        assert err.backward_mse == pytest.approx(backward.mean(), rel=1e-12)
        assert err.forward_haus == pytest.approx(forward.max(), rel=1e-12)
        assert err.backward_haus == pytest.approx(backward.max(), rel=1e-12)
        assert err.symmetric_mse == max(err.forward_mse, err.backward_mse)

    def test_d2_never_exceeds_d1(self, sphere, rng):
        """Test point-to-plane error is bounded by point-to-point error."""
        ref = estimate_normals(sphere)
        dist = estimate_normals(sphere.with_positions(sphere.positions + rng.normal(0, 0.5, size=(len(sphere), 3))))
        assert d2_error(ref, dist).symmetric_mse <= d1_error(ref, dist).symmetric_mse

    def test_d2_requires_normals(self):
        """Test D2 without normals is an error."""
        cloud = PointCloud(positions=[[0, 0, 0]])
        with pytest.raises(MissingAttributeError):
            d2_error(cloud, cloud)

    def test_empty_cloud(self):
        """Test an empty cloud cannot be matched."""
        with pytest.raises(DegenerateInputError):
            d1_error(PointCloud(positions=np.empty((0, 3))), PointCloud(positions=[[0, 0, 0]]))


class TestGeometryPsnr:
    """Test geometry PSNR."""

    def test_zero_db(self):
        """Test mse = 3 * peak^2 gives 0 dB."""
        assert geometry_psnr(3 * 1023.0**2, bit_depth=10) == pytest.approx(0.0, abs=1e-12)

    def test_known_value(self):
        """Test mse 25 at 10 bits is about 50.99 dB."""
        assert geometry_psnr(25.0, bit_depth=10) == pytest.approx(50.99, abs=5e-3)

    def test_zero_mse_is_infinite(self):
        """Test lossless geometry gives the +inf sentinel."""
        assert geometry_psnr(0.0) == math.inf

    def test_peak_override(self):
        """Test an explicit peak replaces 2^bit_depth - 1."""
        assert geometry_psnr(3.0, peak=1.0) == pytest.approx(0.0, abs=1e-12)

    def test_negative_mse(self):
        """Test a negative error is rejected."""
        with pytest.raises(DataError):
            geometry_psnr(-1.0)


class TestColorError:
    """Test YUV color errors."""

    def test_gray_is_neutral(self):
        """Test gray maps to Y equal to the gray level and neutral chroma."""
        assert np.allclose(rgb_to_yuv([[128, 128, 128]]), [[128.0, 128.0, 128.0]], atol=1e-9)

    def test_single_point_red_step(self):
        """Test one red code step changes Y by the BT.709 red weight."""
        ref = PointCloud(positions=[[0, 0, 0]], colors=[[128, 128, 128]])
        dist = PointCloud(positions=[[0, 0, 0]], colors=[[129, 128, 128]])
        err = color_error(ref, dist)
        assert err.mse_y == pytest.approx(0.2126**2, rel=1e-9)
        psnr_y, _, _, psnr_yuv = yuv_psnr(err)
        assert psnr_y == pytest.approx(10 * math.log10(255.0**2 / 0.2126**2), rel=1e-9)
        assert math.isfinite(psnr_yuv)

    def test_matches_exhaustive_scan(self, rng):
        """Test per-channel MSE against brute-force matches and written-out BT.709."""
        ref, dist = rng.uniform(0, 40, size=(80, 3)), rng.uniform(0, 40, size=(70, 3))
        ref_rgb, dist_rgb = rng.integers(0, 256, size=(80, 3)), rng.integers(0, 256, size=(70, 3))
        forward_ids, backward_ids = brute_matches(ref, dist)
        forward = np.mean((bt709(dist_rgb)[forward_ids] - bt709(ref_rgb)) ** 2, axis=0)
        backward = np.mean((bt709(ref_rgb)[backward_ids] - bt709(dist_rgb)) ** 2, axis=0)
        expected = np.maximum(forward, backward)

        err = color_error(PointCloud(positions=ref, colors=ref_rgb), PointCloud(positions=dist, colors=dist_rgb))
        assert [err.mse_y, err.mse_u, err.mse_v] == pytest.approx(expected.tolist(), rel=1e-9)
        psnr_y, psnr_u, psnr_v, psnr_yuv = yuv_psnr(err)
        assert psnr_y == pytest.approx(10 * math.log10(255.0**2 / expected[0]), rel=1e-9)
        assert psnr_yuv == pytest.approx((6 * psnr_y + psnr_u + psnr_v) / 8, rel=1e-12)

    def test_identity_is_infinite(self, sphere):
        """Test identical colors give infinite PSNR on every channel."""
        assert all(math.isinf(v) for v in yuv_psnr(color_error(sphere, sphere)))

    def test_requires_colors(self):
        """Test missing colors are an error."""
        cloud = PointCloud(positions=[[0, 0, 0]])
        with pytest.raises(MissingAttributeError):
            color_error(cloud, cloud)


class TestPointMetricRows:
    """Test the combined point metric table."""

    def test_identity(self, sphere):
        """Test identical clouds give zero errors and infinite PSNRs."""
        rows = {row.name: row for row in point_metric_rows(sphere, sphere)}
        assert rows["d1_mse"].value == 0.0
        assert rows["d2_mse"].value == 0.0
        assert rows["psnr_d1"].is_sentinel
        assert rows["psnr_yuv"].is_sentinel
        assert rows["d1_mse"].higher_is_better is False

    def test_uncolored_skips_color_rows(self, make_sphere):
        """Test color rows need colors on both clouds."""
        cloud = make_sphere(colored=False)
        names = [row.name for row in point_metric_rows(cloud, cloud)]
        assert "psnr_y" not in names
        assert names[:2] == ["d1_mse", "d2_mse"]

    def test_direction(self):
        """Test the direction selects the forward or backward value."""
        ref = PointCloud(positions=[[0, 0, 0], [10, 0, 0], [0, 10, 0], [0, 0, 10]])
        dist = PointCloud(positions=[[0, 0, 0], [10, 0, 0], [0, 10, 0], [0, 0, 10], [1, 1, 1]])
        forward = {r.name: r.value for r in point_metric_rows(ref, dist, direction="forward", normal_k=3)}
        backward = {r.name: r.value for r in point_metric_rows(ref, dist, direction="backward", normal_k=3)}
        assert forward["d1_mse"] == 0.0
        assert backward["d1_mse"] == pytest.approx(3.0 / 5.0)

    def test_unknown_direction(self, sphere):
        """Test an unknown direction is a usage error."""
        with pytest.raises(UsageError):
            point_metric_rows(sphere, sphere, direction="sideways")

    def test_small_clouds_use_every_neighbour(self):
        """Test clouds no larger than normal_k still get D2 from n - 1 neighbours."""
        cloud = PointCloud(positions=[[0, 0, 0], [4, 0, 0], [0, 4, 0], [4, 4, 0], [2, 2, 0]])
        rows = {row.name: row.value for row in point_metric_rows(cloud, cloud)}
        assert rows["d1_mse"] == 0.0
        assert rows["d2_mse"] == 0.0

    def test_two_point_clouds_skip_d2(self):
        """Test D2 rows are left out when no normal can be estimated."""
        ref = PointCloud(positions=[[0, 0, 0], [1, 0, 0]])
        dist = PointCloud(positions=[[0, 0, 0], [1, 0, 2]])
        rows = {row.name: row.value for row in point_metric_rows(ref, dist)}
        assert list(rows) == ["d1_mse", "d1_hausdorff", "psnr_d1", "psnr_d1_hausdorff"]
        assert rows["d1_mse"] == pytest.approx(2.0)
