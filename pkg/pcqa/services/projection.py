"""Orthographic rendering of a cloud onto the six faces of a bounding box.

Y is up. Front/back look along Z, left/right along X, top/bottom along Y.
Every image is oriented as seen by a viewer outside the box facing it, with
image rows running top to bottom.
"""

import logging
import math
from pathlib import Path
from typing import NamedTuple

import numpy as np
from PIL import Image

from pcqa.exceptions import DataError, DegenerateInputError
from pcqa.models.cloud import BoundingBox, PointCloud
from pcqa.models.views import VIEW_NAMES, View, ViewSet
from pcqa.services.preprocess import bounding_box, union_box

logger = logging.getLogger(__name__)

DEFAULT_BACKGROUND = (128, 128, 128)
DEFAULT_SPLAT_RADIUS = 1
# Uncolored clouds are drawn in white so they stand out from the gray background
UNCOLORED_POINT = (255, 255, 255)


class _ViewAxes(NamedTuple):
    depth_axis: int
    from_max: bool
    col_axis: int
    col_flip: bool
    row_axis: int
    row_flip: bool


VIEW_AXES: dict[str, _ViewAxes] = {
    "front": _ViewAxes(2, True, 0, False, 1, True),
    "back": _ViewAxes(2, False, 0, True, 1, True),
    "left": _ViewAxes(0, False, 2, False, 1, True),
    "right": _ViewAxes(0, True, 2, True, 1, True),
    "top": _ViewAxes(1, True, 0, False, 2, False),
    "bottom": _ViewAxes(1, False, 0, False, 2, True),
}


def grid_dims(box: BoundingBox, resolution: int = 1) -> tuple[int, int, int]:
    """Raster size along x, y and z: ceil(extent * resolution) + 1."""
    return tuple(int(math.ceil(e * resolution - 1e-9)) + 1 for e in box.extent)  # type: ignore[return-value]


def _render_view(
    name: str,
    cloud: PointCloud,
    grid: np.ndarray,
    dims: tuple[int, int, int],
    box: BoundingBox,
    splat_radius: int,
    background: tuple[int, int, int],
) -> View:
    axes = VIEW_AXES[name]
    height, width = dims[axes.row_axis], dims[axes.col_axis]

    cols = grid[:, axes.col_axis]
    if axes.col_flip:
        cols = width - 1 - cols
    rows = grid[:, axes.row_axis]
    if axes.row_flip:
        rows = height - 1 - rows
    if axes.from_max:
        depth = box.max_corner[axes.depth_axis] - cloud.positions[:, axes.depth_axis]
    else:
        depth = cloud.positions[:, axes.depth_axis] - box.min_corner[axes.depth_axis]

    # Nearest point first, smaller id first among equal depths; the first
    # writer of every pixel wins
    order = np.lexsort((np.arange(len(cloud)), depth))
    rows, cols, depth = rows[order], cols[order], depth[order]

    span = np.arange(-splat_radius, splat_radius + 1)
    d_row, d_col = np.meshgrid(span, span, indexing="ij")
    splat_rows = (rows[:, None] + d_row.reshape(1, -1)).reshape(-1)
    splat_cols = (cols[:, None] + d_col.reshape(1, -1)).reshape(-1)
    owner = np.repeat(np.arange(order.size), d_row.size)
    inside = (splat_rows >= 0) & (splat_rows < height) & (splat_cols >= 0) & (splat_cols < width)
    pixel = splat_rows[inside] * width + splat_cols[inside]
    owner = owner[inside]

    pixel, first = np.unique(pixel, return_index=True)
    winner = order[owner[first]]

    colors = cloud.colors if cloud.colors is not None else np.tile(np.array(UNCOLORED_POINT, np.uint8), (len(cloud), 1))
    rgb = np.empty((height * width, 3), dtype=np.uint8)
    rgb[:] = np.asarray(background, dtype=np.uint8)
    rgb[pixel] = colors[winner]
    mask = np.zeros(height * width, dtype=bool)
    mask[pixel] = True
    depth_map = np.full(height * width, np.inf)
    depth_map[pixel] = depth[owner[first]]

    return View(
        name=name,
        rgb=rgb.reshape(height, width, 3),
        mask=mask.reshape(height, width),
        depth=depth_map.reshape(height, width),
    )


def project_six_views(
    cloud: PointCloud,
    box: BoundingBox,
    splat_radius: int = DEFAULT_SPLAT_RADIUS,
    background: tuple[int, int, int] = DEFAULT_BACKGROUND,
    resolution: int = 1,
) -> ViewSet:
    """Render a cloud onto the six faces of box with a z-buffer.

    Each point is drawn as a (2r+1) x (2r+1) square. The point nearest the
    viewing plane owns a pixel; equal depths go to the smaller point id.

    Raises:
        DegenerateInputError: Empty cloud.
        DataError: The box does not contain the cloud, or bad radius/resolution.
    """
    if len(cloud) == 0:
        raise DegenerateInputError("cannot project an empty cloud")
    if splat_radius < 0:
        raise DataError(f"splat radius must be >= 0, got {splat_radius}")
    if resolution < 1:
        raise DataError(f"resolution must be >= 1 pixel per voxel, got {resolution}")
    if not box.contains(cloud.positions):
        raise DataError("projection box does not contain the cloud")

    dims = grid_dims(box, resolution)
    scaled = (cloud.positions - np.asarray(box.min_corner)) * resolution
    grid = np.floor(scaled + 0.5).astype(np.int64)
    grid = np.minimum(grid, np.asarray(dims) - 1)

    views = {
        name: _render_view(name, cloud, grid, dims, box, splat_radius, background)
        for name in VIEW_NAMES
    }
    logger.debug("Projected %d points onto %s raster grid", len(cloud), dims)
    return ViewSet(views=views, box=box, resolution=resolution)


def project_pair(
    ref: PointCloud,
    dist: PointCloud,
    splat_radius: int = DEFAULT_SPLAT_RADIUS,
    background: tuple[int, int, int] = DEFAULT_BACKGROUND,
    resolution: int = 1,
) -> tuple[ViewSet, ViewSet]:
    """Render both clouds from their union box so the views are pixel-aligned."""
    box = union_box(bounding_box(ref), bounding_box(dist))
    return (
        project_six_views(ref, box, splat_radius, background, resolution),
        project_six_views(dist, box, splat_radius, background, resolution),
    )


def dump_views(view_set: ViewSet, directory: Path | str, stem: str) -> list[Path]:
    """Write ``stem_<view>.ppm`` (P6) and ``stem_<view>_mask.pgm`` (P5) files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for view in view_set:
        image_path = directory / f"{stem}_{view.name}.ppm"
        mask_path = directory / f"{stem}_{view.name}_mask.pgm"
        Image.fromarray(np.ascontiguousarray(view.rgb)).save(image_path, format="PPM")
        mask = np.where(view.mask, 255, 0).astype(np.uint8)
        Image.fromarray(mask).save(mask_path, format="PPM")
        written += [image_path, mask_path]
    logger.info("Wrote %d view files to %s", len(written), directory)
    return written


def load_view(directory: Path | str, stem: str, name: str) -> View:
    """Read back one dumped view. Depth is not stored: 0 where occupied, inf elsewhere."""
    directory = Path(directory)
    with Image.open(directory / f"{stem}_{name}.ppm") as image:
        rgb = np.asarray(image.convert("RGB"), dtype=np.uint8).copy()
    with Image.open(directory / f"{stem}_{name}_mask.pgm") as image:
        mask = np.asarray(image.convert("L")) > 127
    depth = np.where(mask, 0.0, np.inf)
    return View(name=name, rgb=rgb, mask=mask, depth=depth)
