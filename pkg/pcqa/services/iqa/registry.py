"""Registry of full-reference image metrics.

Built-in metrics register themselves on import of ``pcqa.services.iqa``.
Third-party metrics (FSIM, VSI, ...) plug in with the same decorator::

    @register_metric("fsim", min_size=8)
    def fsim(ref, dist, mask=None):
        ...
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from pcqa.exceptions import UsageError

logger = logging.getLogger(__name__)

MetricFunc = Callable[[np.ndarray, np.ndarray, "np.ndarray | None"], float]


class IqaMetricId(str, Enum):
    """Metrics shipped with the toolkit."""

    PSNR = "psnr"
    UQI = "uqi"
    SSIM = "ssim"
    MS_SSIM = "ms_ssim"
    GMSD = "gmsd"

    @property
    def higher_is_better(self) -> bool:
        return get_metric(self.value).higher_is_better


@dataclass(frozen=True)
class MetricSpec:
    """A registered scoring routine and its metadata.

    Attributes:
        name: Registry key.
        func: Callable(ref, dist, mask) -> float on float64 images.
        higher_is_better: Direction of merit.
        luma: Score on BT.709 luma instead of RGB.
        min_size: Smallest allowed image side in pixels.
    """

    name: str
    func: MetricFunc
    higher_is_better: bool = True
    luma: bool = True
    min_size: int = 1


_REGISTRY: dict[str, MetricSpec] = {}


def register_metric(
    name: str,
    *,
    higher_is_better: bool = True,
    luma: bool = True,
    min_size: int = 1,
) -> Callable[[MetricFunc], MetricFunc]:
    """Decorator adding a scoring function to the registry."""

    def decorator(func: MetricFunc) -> MetricFunc:
        if name in _REGISTRY:
            logger.warning("Replacing registered IQA metric %r", name)
        _REGISTRY[name] = MetricSpec(
            name=name,
            func=func,
            higher_is_better=higher_is_better,
            luma=luma,
            min_size=min_size,
        )
        return func

    return decorator


def unregister_metric(name: str) -> None:
    _REGISTRY.pop(name, None)


def get_metric(name: str | IqaMetricId) -> MetricSpec:
    key = name.value if isinstance(name, IqaMetricId) else str(name)
    try:
        return _REGISTRY[key]
    except KeyError:
        raise UsageError(f"Unknown IQA metric {key!r}; available: {', '.join(available_metrics())}") from None


def available_metrics() -> list[str]:
    return sorted(_REGISTRY)
