"""Point-to-point (D1) and point-to-plane (D2) geometric errors."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from pcqa.exceptions import DataError, DegenerateInputError, MissingAttributeError
from pcqa.models.cloud import PointCloud
from pcqa.models.scores import GeometryError
from pcqa.services.spatial_index import build_index, nearest_batch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Correspondence:
    """Nearest-neighbour matches in both directions.

    Attributes:
        forward: For every ref point, the id of its nearest dist point.
        backward: For every dist point, the id of its nearest ref point.
    """

    forward: np.ndarray
    backward: np.ndarray


def match_clouds(ref: PointCloud, dist: PointCloud, workers: int = 1) -> Correspondence:
    """Find nearest neighbours ref->dist and dist->ref.

    Raises:
        DegenerateInputError: Either cloud is empty.
    """
    if len(ref) == 0 or len(dist) == 0:
        raise DegenerateInputError("geometric errors need two non-empty clouds")
    forward, _ = nearest_batch(build_index(dist.positions), ref.positions, workers=workers)
    backward, _ = nearest_batch(build_index(ref.positions), dist.positions, workers=workers)
    return Correspondence(forward=forward, backward=backward)


def _pool(forward: np.ndarray, backward: np.ndarray) -> GeometryError:
    forward_mse, backward_mse = float(np.mean(forward)), float(np.mean(backward))
    forward_haus, backward_haus = float(np.max(forward)), float(np.max(backward))
    return GeometryError(
        forward_mse=forward_mse,
        backward_mse=backward_mse,
        symmetric_mse=max(forward_mse, backward_mse),
        forward_haus=forward_haus,
        backward_haus=backward_haus,
        symmetric_haus=max(forward_haus, backward_haus),
    )


def d1_error(ref: PointCloud, dist: PointCloud, matches: Correspondence | None = None) -> GeometryError:
    """Point-to-point error: squared distance to the nearest neighbour."""
    matches = matches or match_clouds(ref, dist)
    forward = dist.positions[matches.forward] - ref.positions
    backward = ref.positions[matches.backward] - dist.positions
    return _pool(np.einsum("ij,ij->i", forward, forward), np.einsum("ij,ij->i", backward, backward))


def d2_error(ref: PointCloud, dist: PointCloud, matches: Correspondence | None = None) -> GeometryError:
    """Point-to-plane error: squared projection of the error vector on the source normal.

    The forward direction projects on ref normals, the backward direction on
    dist normals, so both clouds must carry normals.

    Raises:
        MissingAttributeError: A cloud has no normals.
    """
    for name, cloud in (("reference", ref), ("distorted", dist)):
        if cloud.normals is None:
            raise MissingAttributeError(f"point-to-plane error needs normals on the {name} cloud")
    matches = matches or match_clouds(ref, dist)
    forward = dist.positions[matches.forward] - ref.positions
    backward = ref.positions[matches.backward] - dist.positions
    forward_proj = np.einsum("ij,ij->i", forward, ref.normals)
    backward_proj = np.einsum("ij,ij->i", backward, dist.normals)
    return _pool(forward_proj**2, backward_proj**2)


def peak_value(bit_depth: int) -> float:
    """Largest coordinate of a cloud at the given precision."""
    return float(2**bit_depth - 1)


def geometry_psnr(mse: float, bit_depth: int = 10, peak: float | None = None) -> float:
    """10*log10(3*p^2 / mse), with p = 2^bit_depth - 1 unless given.

    Returns +inf for a zero error.
    """
    if mse < 0 or math.isnan(mse):
        raise DataError(f"mean squared error must be non-negative, got {mse}")
    if mse == 0:
        return math.inf
    p = peak if peak is not None else peak_value(bit_depth)
    return 10.0 * math.log10(3.0 * p * p / mse)
