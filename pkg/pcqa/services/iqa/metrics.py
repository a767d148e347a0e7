"""PSNR, UQI, SSIM, MS-SSIM and GMSD on gray images.

All windowed filters pad symmetrically (``mode="reflect"`` in scipy.ndimage,
which mirrors the edge sample). When a mask is given the quality map is
pooled over masked pixels only.
"""

import math

import numpy as np
from scipy import ndimage

from pcqa.exceptions import DataError
from pcqa.services.iqa.registry import register_metric

PEAK = 255.0
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
UQI_WINDOW = 8
MS_SSIM_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
GMSD_C = 170.0
PREWITT_X = np.array([[1.0, 0.0, -1.0]] * 3) / 3.0
PREWITT_Y = PREWITT_X.T


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    """Normalized 1-D Gaussian taps; the 2-D window is their outer product."""
    x = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    taps = np.exp(-(x**2) / (2.0 * sigma**2))
    return taps / taps.sum()


def _gaussian_blur(img: np.ndarray, taps: np.ndarray) -> np.ndarray:
    out = ndimage.correlate1d(img, taps, axis=0, mode="reflect")
    return ndimage.correlate1d(out, taps, axis=1, mode="reflect")


def _pool(quality_map: np.ndarray, mask: np.ndarray | None) -> float:
    if mask is None:
        return float(np.mean(quality_map))
    if not mask.any():
        raise DataError("occupancy mask selects no pixels")
    return float(np.mean(quality_map[mask]))


def _downsample(img: np.ndarray) -> np.ndarray:
    """2x2 block mean; an odd trailing row or column is dropped."""
    h, w = (img.shape[0] // 2) * 2, (img.shape[1] // 2) * 2
    img = img[:h, :w]
    return 0.25 * (img[0::2, 0::2] + img[1::2, 0::2] + img[0::2, 1::2] + img[1::2, 1::2])


def _downsample_mask(mask: np.ndarray | None) -> np.ndarray | None:
    if mask is None:
        return None
    h, w = (mask.shape[0] // 2) * 2, (mask.shape[1] // 2) * 2
    m = mask[:h, :w]
    return m[0::2, 0::2] | m[1::2, 0::2] | m[0::2, 1::2] | m[1::2, 1::2]


@register_metric("psnr", min_size=1)
def psnr(ref: np.ndarray, dist: np.ndarray, mask: np.ndarray | None = None) -> float:
    """10*log10(255^2 / MSE); +inf on identical inputs."""
    mse = _pool((ref - dist) ** 2, mask)
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(PEAK**2 / mse)


def _ssim_maps(ref: np.ndarray, dist: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(ssim_map, contrast_structure_map) with the Gaussian window."""
    taps = gaussian_window()
    c1 = (SSIM_K1 * PEAK) ** 2
    c2 = (SSIM_K2 * PEAK) ** 2

    mu_x = _gaussian_blur(ref, taps)
    mu_y = _gaussian_blur(dist, taps)
    sigma_xx = _gaussian_blur(ref * ref, taps) - mu_x**2
    sigma_yy = _gaussian_blur(dist * dist, taps) - mu_y**2
    sigma_xy = _gaussian_blur(ref * dist, taps) - mu_x * mu_y

    cs_map = (2.0 * sigma_xy + c2) / (sigma_xx + sigma_yy + c2)
    luminance_map = (2.0 * mu_x * mu_y + c1) / (mu_x**2 + mu_y**2 + c1)
    return luminance_map * cs_map, cs_map


@register_metric("ssim", min_size=SSIM_WINDOW)
def ssim(ref: np.ndarray, dist: np.ndarray, mask: np.ndarray | None = None) -> float:
    """Mean SSIM with an 11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03."""
    ssim_map, _ = _ssim_maps(ref, dist)
    return _pool(ssim_map, mask)


@register_metric("ms_ssim", min_size=SSIM_WINDOW * 2 ** (len(MS_SSIM_WEIGHTS) - 1))
def ms_ssim(
    ref: np.ndarray,
    dist: np.ndarray,
    mask: np.ndarray | None = None,
    weights: tuple[float, ...] = MS_SSIM_WEIGHTS,
) -> float:
    """Multi-scale SSIM: contrast-structure at every scale, full SSIM at the coarsest.

    Negative per-scale terms are clipped to zero before exponentiation.
    With ``weights=(1.0,)`` this is plain SSIM.
    """
    minimum = SSIM_WINDOW * 2 ** (len(weights) - 1)
    if min(ref.shape[:2]) < minimum:
        raise DataError(f"ms_ssim with {len(weights)} scales needs images at least {minimum} px per side")
    score = 1.0
    for level, weight in enumerate(weights):
        ssim_map, cs_map = _ssim_maps(ref, dist)
        last = level == len(weights) - 1
        term = _pool(ssim_map if last else cs_map, mask)
        score *= max(term, 0.0) ** weight
        if not last:
            ref, dist, mask = _downsample(ref), _downsample(dist), _downsample_mask(mask)
    return float(score)


@register_metric("uqi", min_size=UQI_WINDOW)
def uqi(ref: np.ndarray, dist: np.ndarray, mask: np.ndarray | None = None) -> float:
    """Universal quality index over 8x8 sliding windows.

    Windows where both images are flat score 2*mu_x*mu_y / (mu_x^2 + mu_y^2),
    or 1 when both means are zero as well.
    """
    def mean(img: np.ndarray) -> np.ndarray:
        return ndimage.uniform_filter(img, size=UQI_WINDOW, mode="reflect")

    mu_x, mu_y = mean(ref), mean(dist)
    sigma_xx = np.maximum(mean(ref * ref) - mu_x**2, 0.0)
    sigma_yy = np.maximum(mean(dist * dist) - mu_y**2, 0.0)
    sigma_xy = mean(ref * dist) - mu_x * mu_y

    # Cancellation noise in flat windows would otherwise turn 0/0 into garbage
    scale = 1e-10 * (mu_x**2 + mu_y**2 + 1.0)
    flat = (sigma_xx <= scale) & (sigma_yy <= scale)
    sigma_xx = np.where(flat, 0.0, sigma_xx)
    sigma_yy = np.where(flat, 0.0, sigma_yy)
    sigma_xy = np.where(flat, 0.0, sigma_xy)

    mean_sq = mu_x**2 + mu_y**2
    var_sum = sigma_xx + sigma_yy
    denominator = mean_sq * var_sum
    quality = np.ones_like(ref)
    only_flat = (denominator == 0) & (mean_sq != 0)
    quality[only_flat] = 2.0 * mu_x[only_flat] * mu_y[only_flat] / mean_sq[only_flat]
    regular = denominator != 0
    quality[regular] = 4.0 * mu_x[regular] * mu_y[regular] * sigma_xy[regular] / denominator[regular]
    return _pool(quality, mask)


def _gradient_magnitude(img: np.ndarray) -> np.ndarray:
    gx = ndimage.correlate(img, PREWITT_X, mode="reflect")
    gy = ndimage.correlate(img, PREWITT_Y, mode="reflect")
    return np.sqrt(gx**2 + gy**2)


@register_metric("gmsd", higher_is_better=False, min_size=4)
def gmsd(ref: np.ndarray, dist: np.ndarray, mask: np.ndarray | None = None) -> float:
    """Gradient magnitude similarity deviation; 0 on identical inputs."""
    # 2x2 mean over (i, i+1) x (j, j+1), then every other pixel
    ref = ndimage.uniform_filter(ref, size=2, mode="reflect", origin=-1)[::2, ::2]
    dist = ndimage.uniform_filter(dist, size=2, mode="reflect", origin=-1)[::2, ::2]
    if mask is not None:
        mask = ndimage.maximum_filter(mask.astype(np.uint8), size=2, mode="reflect", origin=-1)[::2, ::2] > 0
    m_ref, m_dist = _gradient_magnitude(ref), _gradient_magnitude(dist)
    gms = (2.0 * m_ref * m_dist + GMSD_C) / (m_ref**2 + m_dist**2 + GMSD_C)
    values = gms if mask is None else gms[mask]
    if values.size == 0:
        raise DataError("occupancy mask selects no pixels")
    return float(np.std(values))
