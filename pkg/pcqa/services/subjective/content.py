"""Content descriptors of source clouds: spatial information and colorfulness."""

import logging

import numpy as np
from scipy import ndimage

from pcqa.models.cloud import PointCloud
from pcqa.models.views import View, ViewSet
from pcqa.services.iqa.luma import luminance
from pcqa.services.preprocess import bounding_box
from pcqa.services.projection import DEFAULT_BACKGROUND, DEFAULT_SPLAT_RADIUS, project_six_views

logger = logging.getLogger(__name__)

CF_MEAN_WEIGHT = 0.3


def view_spatial_information(view: View) -> float:
    """Standard deviation of the Sobel gradient magnitude of the view's luma."""
    luma = luminance(view.rgb)
    gx = ndimage.sobel(luma, axis=1, mode="reflect")
    gy = ndimage.sobel(luma, axis=0, mode="reflect")
    return float(np.std(np.hypot(gx, gy)))


def view_colorfulness(view: View) -> float | None:
    """Opponent-color colorfulness over occupied pixels; None for an empty view."""
    if not view.mask.any():
        return None
    rgb = view.rgb[view.mask].astype(np.float64)
    rg = rgb[:, 0] - rgb[:, 1]
    yb = 0.5 * (rgb[:, 0] + rgb[:, 1]) - rgb[:, 2]
    spread = np.sqrt(rg.var() + yb.var())
    centre = np.sqrt(rg.mean() ** 2 + yb.mean() ** 2)
    return float(spread + CF_MEAN_WEIGHT * centre)


def spatial_information(views: ViewSet) -> float:
    """SI: the largest per-view spatial information."""
    return max(view_spatial_information(view) for view in views)


def colorfulness(views: ViewSet) -> float:
    """CF: mean colorfulness over views with at least one occupied pixel."""
    values = [cf for cf in (view_colorfulness(view) for view in views) if cf is not None]
    return float(np.mean(values)) if values else 0.0


def content_descriptors(
    cloud: PointCloud,
    splat_radius: int = DEFAULT_SPLAT_RADIUS,
    background: tuple[int, int, int] = DEFAULT_BACKGROUND,
) -> tuple[float, float]:
    """(SI, CF) of a cloud rendered from its own bounding box."""
    views = project_six_views(cloud, bounding_box(cloud), splat_radius, background)
    si, cf = spatial_information(views), colorfulness(views)
    logger.debug("Content descriptors: SI=%.4f CF=%.4f", si, cf)
    return si, cf
