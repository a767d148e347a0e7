"""Pooling six per-view scores into one point-cloud score.

Weighted pooling gives each lateral view (front, back, left, right) the
weight (1 - gamma) / 4 and each of top and bottom gamma / 2. gamma = 1/3
reproduces the plain mean.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from pcqa.exceptions import DataError
from pcqa.models.cloud import PointCloud
from pcqa.models.scores import ViewScores
from pcqa.models.views import LATERAL_VIEWS, VERTICAL_VIEWS, VIEW_NAMES
from pcqa.services.iqa import IqaMetricId, get_metric, iqa_score
from pcqa.services.projection import DEFAULT_BACKGROUND, DEFAULT_SPLAT_RADIUS, project_pair

logger = logging.getLogger(__name__)

DEFAULT_GAMMA = 0.19
RECOMMENDED_GAMMA = (0.13, 0.31)
POOLING_MODES = ("mean", "weighted")


def check_gamma(gamma: float, recommended: tuple[float, float] = RECOMMENDED_GAMMA) -> float:
    """Validate gamma; values outside the recommended interval only warn.

    Raises:
        DataError: gamma outside [0, 1].
    """
    if not 0.0 <= gamma <= 1.0 or math.isnan(gamma):
        raise DataError(f"gamma must lie in [0, 1], got {gamma}")
    low, high = recommended
    if not low <= gamma <= high:
        logger.warning("gamma=%.4g lies outside the recommended interval [%.2f, %.2f]", gamma, low, high)
    return float(gamma)


def pooling_weights(gamma: float) -> dict[str, float]:
    """Weight of every view, in VIEW_NAMES order; the weights sum to 1."""
    lateral, vertical = (1.0 - gamma) / 4.0, gamma / 2.0
    return {name: (lateral if name in LATERAL_VIEWS else vertical) for name in VIEW_NAMES}


def pool_views(v: ViewScores) -> float:
    """Weighted pooling of the six view scores.

    Computed as L + gamma * (V - L) with L the lateral mean and V the
    vertical mean, which equals the weighted sum and returns equal inputs
    unchanged.
    """
    scores = dict(zip(VIEW_NAMES, v.as_tuple()))
    values = np.array(v.as_tuple())
    if not np.all(np.isfinite(values)):
        # Views with zero weight must not turn an infinite score into NaN
        weights = pooling_weights(v.gamma)
        return float(sum(w * scores[n] for n, w in weights.items() if w > 0))

    front, back, left, right = (scores[n] for n in LATERAL_VIEWS)
    top, bottom = (scores[n] for n in VERTICAL_VIEWS)
    lateral = ((front + back) + (left + right)) / 4.0
    vertical = (top + bottom) / 2.0
    return lateral + v.gamma * (vertical - lateral)


def pool_mean(v: ViewScores) -> float:
    """Arithmetic mean of the six view scores."""
    return float(np.mean(v.as_tuple()))


@dataclass(frozen=True)
class ProjectionScores:
    """Per-view scores of one metric on one pair plus both pooled values."""

    metric: str
    view_scores: ViewScores
    mean: float
    weighted: float
    higher_is_better: bool

    def pooled(self, pooling: str) -> float:
        if pooling not in POOLING_MODES:
            raise DataError(f"pooling must be one of {POOLING_MODES}, got {pooling!r}")
        return self.weighted if pooling == "weighted" else self.mean


def projection_view_scores(
    ref: PointCloud,
    dist: PointCloud,
    metric: IqaMetricId | str,
    gamma: float = DEFAULT_GAMMA,
    splat_radius: int = DEFAULT_SPLAT_RADIUS,
    background: tuple[int, int, int] = DEFAULT_BACKGROUND,
    resolution: int = 1,
    masked: bool = False,
) -> ProjectionScores:
    """Project both clouds, score each view pair and pool."""
    gamma = check_gamma(gamma)
    spec = get_metric(metric)
    ref_views, dist_views = project_pair(ref, dist, splat_radius, background, resolution)

    scores: dict[str, float] = {}
    for name in VIEW_NAMES:
        ref_view, dist_view = ref_views[name], dist_views[name]
        mask = (ref_view.mask | dist_view.mask) if masked else None
        scores[name] = iqa_score(spec.name, ref_view.rgb, dist_view.rgb, mask=mask)
        logger.debug("%s %s view: %.6g", spec.name, name, scores[name])

    view_scores = ViewScores.from_mapping(scores, gamma)
    return ProjectionScores(
        metric=spec.name,
        view_scores=view_scores,
        mean=pool_mean(view_scores),
        weighted=pool_views(view_scores),
        higher_is_better=spec.higher_is_better,
    )


def projection_pcqa(
    ref: PointCloud,
    dist: PointCloud,
    metric: IqaMetricId | str,
    gamma: float = DEFAULT_GAMMA,
    splat_radius: int = DEFAULT_SPLAT_RADIUS,
    pooling: str = "weighted",
    **render: object,
) -> float:
    """End-to-end projection metric: project, score six view pairs, pool."""
    result = projection_view_scores(ref, dist, metric, gamma, splat_radius, **render)  # type: ignore[arg-type]
    return result.pooled(pooling)
