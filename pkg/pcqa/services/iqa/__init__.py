"""Full-reference image quality metrics for projected view pairs."""

import logging

import numpy as np

from pcqa.exceptions import DataError, DimensionMismatchError
from pcqa.services.iqa import metrics
from pcqa.services.iqa.luma import luminance
from pcqa.services.iqa.registry import (
    IqaMetricId,
    MetricSpec,
    available_metrics,
    get_metric,
    register_metric,
    unregister_metric,
)

logger = logging.getLogger(__name__)

__all__ = [
    "IqaMetricId",
    "MetricSpec",
    "available_metrics",
    "get_metric",
    "iqa_score",
    "luminance",
    "metrics",
    "register_metric",
    "unregister_metric",
]


def _prepare(img: np.ndarray, luma: bool) -> np.ndarray:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 3 and arr.shape[2] == 3:
        return luminance(arr) if luma else arr
    if arr.ndim == 2:
        return arr
    raise DataError(f"images must be (H, W) gray or (H, W, 3) RGB, got shape {arr.shape}")


def iqa_score(
    metric: IqaMetricId | str,
    ref: np.ndarray,
    dist: np.ndarray,
    mask: np.ndarray | None = None,
) -> float:
    """Score dist against ref with a registered metric.

    RGB inputs are reduced to BT.709 luma for luma-defined metrics. A
    boolean mask restricts pooling to the selected pixels.

    Raises:
        DimensionMismatchError: ref and dist differ in shape.
        DataError: Image side below the metric's minimum support.
        UsageError: Unknown metric name.
    """
    spec = get_metric(metric)
    ref_arr, dist_arr = np.asarray(ref), np.asarray(dist)
    if ref_arr.shape != dist_arr.shape:
        raise DimensionMismatchError(f"image shapes differ: {ref_arr.shape} vs {dist_arr.shape}")
    height, width = ref_arr.shape[:2]
    if min(height, width) < spec.min_size:
        raise DataError(
            f"{spec.name} needs images at least {spec.min_size} px per side, got {width}x{height}"
        )
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (height, width):
            raise DimensionMismatchError(f"mask shape {mask.shape} does not match image {height}x{width}")

    return spec.func(_prepare(ref_arr, spec.luma), _prepare(dist_arr, spec.luma), mask)
