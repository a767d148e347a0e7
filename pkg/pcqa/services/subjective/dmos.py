"""Differential scores, z-scores, subject screening and DMOS."""

import logging

import numpy as np

from pcqa.exceptions import DataError, ZeroVarianceError
from pcqa.models.ratings import RatingMatrix

logger = logging.getLogger(__name__)

DEFAULT_RANGE_THRESH = 7.0
DEFAULT_STD_THRESH = 1.2


def differential_scores(r: RatingMatrix) -> np.ndarray:
    """d[i, j] = reference score - score; NaN where subject i did not rate sample j.

    Raises:
        DataError: A rated sample has no reference rating from the same subject.
    """
    ref = r.ref_scores[:, r.sequence_index()]
    missing = r.mask & np.isnan(ref)
    if missing.any():
        pairs = sorted({(r.subjects[i], r.samples[j].sequence) for i, j in zip(*np.nonzero(missing))})
        listed = ", ".join(f"({s}, {q})" for s, q in pairs)
        raise DataError(f"missing reference ratings for (subject, sequence): {listed}")
    return ref - r.scores


def zscore(values) -> np.ndarray:
    """(x - mean) / std with the K-1 denominator.

    Raises:
        DataError: Fewer than two values.
        ZeroVarianceError: All values equal.
    """
    x = np.asarray(values, dtype=np.float64).reshape(-1)
    if x.size < 2:
        raise DataError(f"z-scores need at least 2 values, got {x.size}")
    std = x.std(ddof=1)
    if std == 0:
        raise ZeroVarianceError("z-scores are undefined for a constant vector")
    return (x - x.mean()) / std


def per_sample_zscores(d: np.ndarray) -> np.ndarray:
    """Standardize every sample's ratings across the subjects who gave them.

    Samples rated identically by everyone map to 0; fewer than two ratings map to NaN.
    """
    z = np.full_like(d, np.nan, dtype=np.float64)
    for j in range(d.shape[1]):
        rated = ~np.isnan(d[:, j])
        if rated.sum() < 2:
            continue
        column = d[rated, j]
        std = column.std(ddof=1)
        z[rated, j] = 0.0 if std == 0 else (column - column.mean()) / std
    return z


def screen_subjects(
    d: np.ndarray,
    range_thresh: float = DEFAULT_RANGE_THRESH,
    std_thresh: float = DEFAULT_STD_THRESH,
) -> np.ndarray:
    """Boolean mask of subjects that pass screening.

    Every sample's ratings are first standardized across subjects. A
    subject is rejected when the range of their standardized scores exceeds
    range_thresh and the standard deviation exceeds std_thresh.
    """
    z = per_sample_zscores(np.asarray(d, dtype=np.float64))
    keep = np.ones(z.shape[0], dtype=bool)
    for i in range(z.shape[0]):
        scores = z[i, ~np.isnan(z[i])]
        if scores.size < 2:
            continue
        spread = scores.max() - scores.min()
        std = scores.std(ddof=1)
        if spread > range_thresh and std > std_thresh:
            keep[i] = False
            logger.info("Rejecting subject %d: range %.3f, std %.3f", i, spread, std)
    return keep


def sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.asarray(z, dtype=np.float64)))


def dmos(d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample DMOS from screened differential scores.

    Each subject's ratings are z-scored over that subject's samples and
    squashed with a logistic sigmoid; a sample's DMOS is the mean over its
    raters. Entries to exclude must already be NaN.

    Returns:
        (dmos, n_subjects) per sample column; dmos is NaN for unrated samples.

    Raises:
        ZeroVarianceError: A subject gave the same differential score everywhere.
    """
    d = np.asarray(d, dtype=np.float64)
    per_rating = np.full_like(d, np.nan)
    for i in range(d.shape[0]):
        rated = ~np.isnan(d[i])
        if not rated.any():
            continue
        try:
            per_rating[i, rated] = sigmoid(zscore(d[i, rated]))
        except ZeroVarianceError:
            raise ZeroVarianceError(f"subject {i} gave the same differential score to every sample") from None
    counts = (~np.isnan(per_rating)).sum(axis=0)
    sums = np.nansum(per_rating, axis=0)
    values = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return values, counts
