"""Voxelization, duplicate removal and box normalization of clouds."""

import logging

import numpy as np

from pcqa.exceptions import DataError, DegenerateInputError
from pcqa.models.cloud import BoundingBox, PointCloud

logger = logging.getLogger(__name__)


def round_half_away(values: np.ndarray) -> np.ndarray:
    """Round to the nearest integer, halves away from zero."""
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def quantize_and_dedup(cloud: PointCloud) -> PointCloud:
    """Round positions to integers and merge points sharing a voxel.

    Survivors keep the order of their first occurrence. A merged voxel takes
    the componentwise mean of its colors, rounded, and the renormalized mean
    of its normals. A voxel whose normals cancel keeps the first one.

    Raises:
        DataError: A rounded coordinate falls outside [0, 2^bit_depth - 1].
    """
    if len(cloud) == 0:
        return PointCloud(positions=np.empty((0, 3)), colors=cloud.colors, normals=cloud.normals, bit_depth=cloud.bit_depth)

    rounded = round_half_away(cloud.positions)
    limit = 2**cloud.bit_depth - 1
    if rounded.min() < 0 or rounded.max() > limit:
        raise DataError(
            f"coordinates span [{rounded.min():g}, {rounded.max():g}], outside [0, {limit}] "
            f"for bit depth {cloud.bit_depth}; normalize the cloud first"
        )

    _, first, inverse = np.unique(rounded, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    # Relabel voxels by first occurrence so already-clean clouds come back unchanged
    order = np.argsort(first, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(order.size)
    voxel = relabel[inverse]
    positions = rounded[first[order]]

    counts = np.bincount(voxel, minlength=order.size).astype(np.float64)
    colors = None
    if cloud.colors is not None:
        sums = np.stack(
            [np.bincount(voxel, weights=cloud.colors[:, c].astype(np.float64), minlength=order.size) for c in range(3)],
            axis=1,
        )
        colors = np.clip(round_half_away(sums / counts[:, None]), 0, 255).astype(np.uint8)

    normals = None
    if cloud.normals is not None:
        normals = _merge_normals(cloud.normals, voxel, first[order], counts)

    merged = len(cloud) - positions.shape[0]
    if merged:
        logger.debug("Merged %d duplicate points into %d voxels", merged, positions.shape[0])
    return PointCloud(positions=positions, colors=colors, normals=normals, bit_depth=cloud.bit_depth)


def _merge_normals(normals: np.ndarray, voxel: np.ndarray, first: np.ndarray, counts: np.ndarray) -> np.ndarray:
    merged = normals[first].copy()
    shared = counts > 1
    if not shared.any():
        return merged
    sums = np.zeros_like(merged)
    np.add.at(sums, voxel, normals)
    lengths = np.linalg.norm(sums, axis=1)
    usable = shared & (lengths > 1e-12)
    merged[usable] = sums[usable] / lengths[usable, None]
    return merged


def bounding_box(cloud: PointCloud) -> BoundingBox:
    """Componentwise min/max of the positions."""
    if len(cloud) == 0:
        raise DegenerateInputError("bounding box of an empty cloud is undefined")
    return BoundingBox(
        tuple(cloud.positions.min(axis=0)),  # type: ignore[arg-type]
        tuple(cloud.positions.max(axis=0)),  # type: ignore[arg-type]
    )


def union_box(a: BoundingBox, b: BoundingBox) -> BoundingBox:
    """Smallest box containing both boxes."""
    return BoundingBox(
        tuple(np.minimum(a.min_corner, b.min_corner)),  # type: ignore[arg-type]
        tuple(np.maximum(a.max_corner, b.max_corner)),  # type: ignore[arg-type]
    )


def translate(cloud: PointCloud, offset: tuple[float, float, float] | np.ndarray) -> PointCloud:
    """Rigidly shift a cloud; colors and normals are unchanged."""
    shift = np.asarray(offset, dtype=np.float64).reshape(3)
    return cloud.with_positions(cloud.positions + shift)


def normalize_to_box(cloud: PointCloud, target: BoundingBox) -> PointCloud:
    """Uniformly scale and translate a cloud into target, then re-quantize.

    The scale is the smallest per-axis ratio of target extent to cloud
    extent, so the aspect ratio is kept and every axis fits. Flat axes of
    the cloud are ignored when choosing the ratio.

    Raises:
        DegenerateInputError: Fewer than two distinct positions.
    """
    box = bounding_box(cloud)
    extent = box.extent
    if len(cloud) < 2 or not np.any(extent > 0):
        raise DegenerateInputError("cannot normalize a cloud with a single distinct position")

    target_extent = target.extent
    spread = extent > 0
    scale = float(np.min(target_extent[spread] / extent[spread]))
    positions = (cloud.positions - np.asarray(box.min_corner)) * scale + np.asarray(target.min_corner)
    # Rounding must not push a point across the target's upper faces
    positions = np.minimum(positions, np.floor(np.asarray(target.max_corner) + 1e-9))
    logger.info("Normalizing cloud with scale %.6g into box %s", scale, target.max_corner)

    normalized = PointCloud(positions=positions, colors=cloud.colors, normals=cloud.normals, bit_depth=cloud.bit_depth)
    return quantize_and_dedup(normalized)
