"""Normal estimation by local principal component analysis."""

import logging

import numpy as np

from pcqa.exceptions import DataError, DegenerateInputError
from pcqa.models.cloud import PointCloud
from pcqa.services.spatial_index import NNIndex, build_index, k_nearest_batch

logger = logging.getLogger(__name__)

DEFAULT_K = 16
# Relative eigenvalue below which a neighbourhood counts as rank-deficient
RANK_TOLERANCE = 1e-10


def _orient(normals: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Flip normals to point away from the cloud centroid.

    Normals perpendicular to the centroid direction fall back to making
    their first non-zero component positive.
    """
    outward = positions - positions.mean(axis=0)
    dots = np.einsum("ij,ij->i", normals, outward)
    scale = np.linalg.norm(outward, axis=1) + 1e-300
    sign = np.sign(np.where(np.abs(dots) / scale > 1e-9, dots, 0.0))

    undecided = sign == 0
    if np.any(undecided):
        rows = normals[undecided]
        lead = np.argmax(np.abs(rows) > 1e-12, axis=1)
        sign[undecided] = np.sign(rows[np.arange(rows.shape[0]), lead])
    sign[sign == 0] = 1.0
    return normals * sign[:, None]


def estimate_normals(
    cloud: PointCloud,
    k: int = DEFAULT_K,
    index: NNIndex | None = None,
    workers: int = 1,
) -> PointCloud:
    """Return a copy of the cloud with PCA normals.

    Each normal is the eigenvector of the smallest eigenvalue of the
    covariance of the point's k nearest neighbours (the point included).
    Neighbourhoods whose covariance has rank below two are flagged in
    ``low_confidence``; their normal is still a unit vector orthogonal to
    the dominant direction.

    Raises:
        DegenerateInputError: k >= number of points.
        DataError: k < 2.
    """
    n = len(cloud)
    if k < 2:
        raise DataError(f"normal estimation needs k >= 2, got {k}")
    if k >= n:
        raise DegenerateInputError(f"normal estimation needs more than k={k} points, cloud has {n}")

    index = index or build_index(cloud.positions)
    ids, _ = k_nearest_batch(index, cloud.positions, k, workers=workers)
    neighbourhoods = cloud.positions[ids]
    centered = neighbourhoods - neighbourhoods.mean(axis=1, keepdims=True)
    covariance = np.einsum("nki,nkj->nij", centered, centered) / k

    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    normals = eigenvectors[:, :, 0]
    normals = normals / np.linalg.norm(normals, axis=1, keepdims=True)
    normals = _orient(normals, cloud.positions)

    largest = np.maximum(eigenvalues[:, 2], np.finfo(np.float64).tiny)
    low_confidence = eigenvalues[:, 1] <= RANK_TOLERANCE * largest
    flagged = int(low_confidence.sum())
    if flagged:
        logger.warning("%d of %d normals come from rank-deficient neighbourhoods", flagged, n)

    return cloud.with_normals(normals, low_confidence=low_confidence)
