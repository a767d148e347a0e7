"""Two-sided Grubbs test for rejecting whole samples."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from pcqa.exceptions import DataError
from pcqa.services.stats_core import t_quantile

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.025
MIN_RATINGS = 3


def grubbs_critical(alpha: float = DEFAULT_ALPHA, n: int = 3) -> float:
    """Two-sided critical value ((n-1)/sqrt(n)) * sqrt(t^2 / (n-2+t^2)).

    t is the upper alpha/(2n) quantile of Student's t with n-2 degrees of freedom.

    Raises:
        DataError: n < 3 or alpha outside (0, 1).
    """
    if n < MIN_RATINGS:
        raise DataError(f"Grubbs' test needs n >= 3, got {n}")
    if not 0.0 < alpha < 1.0:
        raise DataError(f"alpha must lie in (0, 1), got {alpha}")
    t = t_quantile(alpha / (2.0 * n), n - 2)
    return (n - 1) / math.sqrt(n) * math.sqrt(t * t / (n - 2 + t * t))


@dataclass(frozen=True)
class GrubbsResult:
    """Per-sample outcome of a single Grubbs pass.

    Attributes:
        kept: True for samples that survive.
        statistic: G per sample, NaN where undefined.
        critical: Critical value per sample, NaN where not tested.
        zero_variance: Samples whose raters all agreed (kept, G undefined).
        too_few: Samples with fewer than three ratings (kept, not tested).
    """

    kept: np.ndarray
    statistic: np.ndarray
    critical: np.ndarray
    zero_variance: np.ndarray
    too_few: np.ndarray


def grubbs_filter(d: np.ndarray, alpha: float = DEFAULT_ALPHA) -> GrubbsResult:
    """Test every sample column once; no iterative re-testing.

    G = max |d - mean| / std over the sample's ratings, compared against
    grubbs_critical(alpha, n) with n the number of ratings of that sample.
    """
    d = np.asarray(d, dtype=np.float64)
    m = d.shape[1]
    kept = np.ones(m, dtype=bool)
    statistic = np.full(m, np.nan)
    critical = np.full(m, np.nan)
    zero_variance = np.zeros(m, dtype=bool)
    too_few = np.zeros(m, dtype=bool)

    for j in range(m):
        ratings = d[~np.isnan(d[:, j]), j]
        n = ratings.size
        if n < MIN_RATINGS:
            too_few[j] = True
            logger.warning("Sample %d has %d ratings; skipping Grubbs' test", j, n)
            continue
        std = ratings.std(ddof=1)
        if std == 0:
            zero_variance[j] = True
            logger.warning("Sample %d has identical ratings; Grubbs statistic undefined", j)
            continue
        statistic[j] = float(np.max(np.abs(ratings - ratings.mean())) / std)
        critical[j] = grubbs_critical(alpha, n)
        kept[j] = statistic[j] <= critical[j]

    logger.info("Grubbs' test rejected %d of %d samples", int((~kept).sum()), m)
    return GrubbsResult(kept, statistic, critical, zero_variance, too_few)
