"""RGB to gray conversion."""

import numpy as np

from pcqa.exceptions import DataError

BT709_LUMA = np.array([0.2126, 0.7152, 0.0722])


def luminance(img: np.ndarray) -> np.ndarray:
    """BT.709 luma of an (H, W, 3) RGB image as float64 in [0, 255]."""
    rgb = np.asarray(img, dtype=np.float64)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise DataError(f"luminance needs an (H, W, 3) image, got shape {rgb.shape}")
    return np.clip(rgb @ BT709_LUMA, 0.0, 255.0)
