"""Point-based objective metrics: D1, D2, Hausdorff, geometry PSNR and YUV PSNR."""

import logging

from pcqa.exceptions import UsageError
from pcqa.models.cloud import PointCloud
from pcqa.models.scores import MetricScore
from pcqa.services.point_metrics.color import color_error, rgb_to_yuv, yuv_psnr
from pcqa.services.point_metrics.geometry import (
    Correspondence,
    d1_error,
    d2_error,
    geometry_psnr,
    match_clouds,
    peak_value,
)
from pcqa.services.point_metrics.normals import estimate_normals

logger = logging.getLogger(__name__)

DIRECTIONS = ("forward", "backward", "symmetric")
# Smallest cloud a PCA normal can be estimated for (k >= 2 other points)
MIN_NORMAL_POINTS = 3

__all__ = [
    "Correspondence",
    "DIRECTIONS",
    "color_error",
    "d1_error",
    "d2_error",
    "estimate_normals",
    "geometry_psnr",
    "match_clouds",
    "peak_value",
    "point_metric_rows",
    "rgb_to_yuv",
    "yuv_psnr",
]


def _with_normals(cloud: PointCloud, normal_k: int, workers: int) -> PointCloud:
    if cloud.has_normals or len(cloud) < MIN_NORMAL_POINTS:
        return cloud
    k = min(normal_k, len(cloud) - 1)
    if k < normal_k:
        logger.info("Cloud has %d points; estimating normals from k=%d neighbours", len(cloud), k)
    return estimate_normals(cloud, k, workers=workers)


def point_metric_rows(
    ref: PointCloud,
    dist: PointCloud,
    *,
    bit_depth: int | None = None,
    peak: float | None = None,
    normal_k: int = 16,
    direction: str = "symmetric",
    workers: int = 1,
) -> list[MetricScore]:
    """Every point-based metric for one pair, in a fixed order.

    Clouds without normals get PCA normals for D2, from normal_k
    neighbours or every other point when the cloud is smaller. D2 rows are
    left out when a cloud has fewer than three points and no normals. Color
    rows are produced only when both clouds are colored.
    """
    if direction not in DIRECTIONS:
        raise UsageError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    bit_depth = bit_depth or ref.bit_depth
    matches = match_clouds(ref, dist, workers=workers)

    ref, dist = _with_normals(ref, normal_k, workers), _with_normals(dist, normal_k, workers)
    d1 = d1_error(ref, dist, matches)
    d2 = d2_error(ref, dist, matches) if ref.has_normals and dist.has_normals else None
    if d2 is None:
        logger.warning("Skipping D2 metrics: normals need at least %d points per cloud", MIN_NORMAL_POINTS)

    errors = {"d1": d1} if d2 is None else {"d1": d1, "d2": d2}
    rows = [MetricScore(name=f"{n}_mse", value=e.mse(direction), higher_is_better=False) for n, e in errors.items()]
    rows += [
        MetricScore(name=f"{n}_hausdorff", value=e.hausdorff(direction), higher_is_better=False)
        for n, e in errors.items()
    ]
    rows += [MetricScore(name=f"psnr_{n}", value=geometry_psnr(e.mse(direction), bit_depth, peak)) for n, e in errors.items()]
    rows += [
        MetricScore(name=f"psnr_{n}_hausdorff", value=geometry_psnr(e.hausdorff(direction), bit_depth, peak))
        for n, e in errors.items()
    ]

    if ref.has_colors and dist.has_colors:
        psnr_y, psnr_u, psnr_v, psnr_yuv = yuv_psnr(color_error(ref, dist, matches))
        rows += [
            MetricScore(name="psnr_y", value=psnr_y),
            MetricScore(name="psnr_u", value=psnr_u),
            MetricScore(name="psnr_v", value=psnr_v),
            MetricScore(name="psnr_yuv", value=psnr_yuv),
        ]
    else:
        logger.info("Skipping color metrics: both clouds must be colored")
    return rows
