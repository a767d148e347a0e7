"""Color errors in BT.709 YUV."""

import math

import numpy as np

from pcqa.exceptions import MissingAttributeError
from pcqa.models.cloud import PointCloud
from pcqa.models.scores import ColorError
from pcqa.services.point_metrics.geometry import Correspondence, match_clouds

# Full-range BT.709 RGB -> YUV, chroma offset by 128
BT709_RGB_TO_YUV = np.array(
    [
        [0.2126, 0.7152, 0.0722],
        [-0.1146, -0.3854, 0.5000],
        [0.5000, -0.4542, -0.0458],
    ]
)
CHROMA_OFFSET = np.array([0.0, 128.0, 128.0])
MAX_CODE = 255.0
# PSNR-YUV weights for Y, U, V
YUV_WEIGHTS = (6.0, 1.0, 1.0)


def rgb_to_yuv(rgb: np.ndarray) -> np.ndarray:
    """Convert (..., 3) 8-bit RGB to float YUV."""
    return np.asarray(rgb, dtype=np.float64) @ BT709_RGB_TO_YUV.T + CHROMA_OFFSET


def color_error(ref: PointCloud, dist: PointCloud, matches: Correspondence | None = None) -> ColorError:
    """Symmetric per-channel YUV MSE over nearest-neighbour correspondences.

    Raises:
        MissingAttributeError: Either cloud has no colors.
    """
    for name, cloud in (("reference", ref), ("distorted", dist)):
        if cloud.colors is None:
            raise MissingAttributeError(f"color error needs colors on the {name} cloud")
    matches = matches or match_clouds(ref, dist)
    ref_yuv, dist_yuv = rgb_to_yuv(ref.colors), rgb_to_yuv(dist.colors)
    forward = np.mean((dist_yuv[matches.forward] - ref_yuv) ** 2, axis=0)
    backward = np.mean((ref_yuv[matches.backward] - dist_yuv) ** 2, axis=0)
    symmetric = np.minimum(np.maximum(forward, backward), MAX_CODE**2)
    return ColorError(mse_y=symmetric[0], mse_u=symmetric[1], mse_v=symmetric[2])


def _channel_psnr(mse: float) -> float:
    return math.inf if mse == 0 else 10.0 * math.log10(MAX_CODE**2 / mse)


def yuv_psnr(err: ColorError) -> tuple[float, float, float, float]:
    """(psnr_y, psnr_u, psnr_v, psnr_yuv); infinite where a channel is error-free."""
    y, u, v = (_channel_psnr(m) for m in (err.mse_y, err.mse_u, err.mse_v))
    wy, wu, wv = YUV_WEIGHTS
    return y, u, v, (wy * y + wu * u + wv * v) / (wy + wu + wv)
