"""Subjective score processing: DMOS, outlier rejection, ANOVA and content descriptors.

The rating pipeline runs in a fixed order: differential scores, subject
screening, Grubbs' test on samples, per-subject z-scores, sigmoid, mean
over subjects.
"""

import logging

import numpy as np

from pcqa.models.ratings import DmosRow, DmosTable, RatingMatrix
from pcqa.services.subjective.analysis import qp_level_summary, session_agreement, setup_means
from pcqa.services.subjective.anova import balanced_design, two_way_anova
from pcqa.services.subjective.content import colorfulness, content_descriptors, spatial_information
from pcqa.services.subjective.dmos import (
    DEFAULT_RANGE_THRESH,
    DEFAULT_STD_THRESH,
    differential_scores,
    dmos,
    per_sample_zscores,
    screen_subjects,
    sigmoid,
    zscore,
)
from pcqa.services.subjective.grubbs import DEFAULT_ALPHA, GrubbsResult, grubbs_critical, grubbs_filter

logger = logging.getLogger(__name__)

FLAG_SUBJECT_OUTLIER = "subject_outlier"
FLAG_GRUBBS = "grubbs"
FLAG_ZERO_VARIANCE = "zero_variance"
FLAG_TOO_FEW = "too_few_ratings"

__all__ = [
    "GrubbsResult",
    "balanced_design",
    "colorfulness",
    "content_descriptors",
    "differential_scores",
    "dmos",
    "grubbs_critical",
    "grubbs_filter",
    "per_sample_zscores",
    "process_ratings",
    "qp_level_summary",
    "screen_subjects",
    "session_agreement",
    "setup_means",
    "sigmoid",
    "spatial_information",
    "two_way_anova",
    "zscore",
]


def process_ratings(
    matrix: RatingMatrix,
    alpha: float = DEFAULT_ALPHA,
    range_thresh: float = DEFAULT_RANGE_THRESH,
    std_thresh: float = DEFAULT_STD_THRESH,
) -> DmosTable:
    """Run the full rating pipeline and return DMOS with rejection flags.

    Samples rejected by Grubbs' test carry no DMOS. Samples that lost
    ratings to rejected subjects are flagged ``subject_outlier``.
    """
    d = differential_scores(matrix)
    keep_subjects = screen_subjects(d, range_thresh, std_thresh)

    screened = d.copy()
    screened[~keep_subjects, :] = np.nan
    grubbs = grubbs_filter(screened, alpha)

    final = screened.copy()
    final[:, ~grubbs.kept] = np.nan
    values, counts = dmos(final)

    lost = (~np.isnan(d[~keep_subjects, :])).any(axis=0) if (~keep_subjects).any() else np.zeros(d.shape[1], bool)
    rows = []
    for j, sample in enumerate(matrix.samples):
        flags = []
        if lost[j]:
            flags.append(FLAG_SUBJECT_OUTLIER)
        if not grubbs.kept[j]:
            flags.append(FLAG_GRUBBS)
        if grubbs.zero_variance[j]:
            flags.append(FLAG_ZERO_VARIANCE)
        if grubbs.too_few[j]:
            flags.append(FLAG_TOO_FEW)
        retained = grubbs.kept[j] and counts[j] > 0
        rows.append(
            DmosRow(
                sample_id=sample.sample_id,
                sequence=sample.sequence,
                gqp=sample.gqp,
                tqp=sample.tqp,
                dmos=float(values[j]) if retained else None,
                n_subjects=int(counts[j]),
                flags=flags,
            )
        )

    rejected = [s for s, kept in zip(matrix.subjects, keep_subjects) if not kept]
    logger.info(
        "DMOS for %d of %d samples; %d subjects rejected",
        sum(row.retained for row in rows),
        len(rows),
        len(rejected),
    )
    return DmosTable(rows=rows, rejected_subjects=rejected)
