"""Point and projection metrics for every pair of a batch manifest."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from pcqa.models.cloud import PointCloud
from pcqa.schemas.export import MetricFlatExport, ProjectionFlatExport
from pcqa.schemas.import_schemas import ManifestEntry
from pcqa.services.ply_io import read_cloud
from pcqa.services.point_metrics import point_metric_rows
from pcqa.services.view_pooling import POOLING_MODES, ProjectionScores, projection_view_scores
from pcqa.services.workers import parallel_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairJob:
    """Everything a worker needs to score one manifest row."""

    entry: ManifestEntry
    bit_depth: int | None = None
    peak: float | None = None
    normal_k: int = 16
    direction: str = "symmetric"
    point_metrics: bool = True
    projection_metrics: tuple[str, ...] = ()
    gamma: float = 0.19
    splat_radius: int = 1
    background: tuple[int, int, int] = (128, 128, 128)
    resolution: int = 1
    masked: bool = False


@dataclass
class PairResult:
    """Rows produced for one pair."""

    metric_rows: list[MetricFlatExport] = field(default_factory=list)
    projection_rows: list[ProjectionFlatExport] = field(default_factory=list)


def sample_columns(entry: ManifestEntry) -> dict[str, object]:
    return {"sample_id": entry.sample_id, "sequence": entry.sequence, "gqp": entry.gqp, "tqp": entry.tqp}


def projection_rows(entry: ManifestEntry, scores: ProjectionScores, poolings: Sequence[str]) -> list[ProjectionFlatExport]:
    """One export row per pooling mode for a scored pair."""
    views = scores.view_scores
    return [
        ProjectionFlatExport(
            **sample_columns(entry),
            metric=scores.metric,
            pooling=pooling,
            gamma=views.gamma,
            s_front=views.s_front,
            s_back=views.s_back,
            s_left=views.s_left,
            s_right=views.s_right,
            s_top=views.s_top,
            s_bottom=views.s_bottom,
            s_final=scores.pooled(pooling),
        )
        for pooling in poolings
    ]


def score_pair(job: PairJob, ref: PointCloud | None = None, dist: PointCloud | None = None) -> PairResult:
    """Score one pair; clouds are read from the manifest paths unless given."""
    entry = job.entry
    ref = ref if ref is not None else read_cloud(entry.ref, job.bit_depth)
    dist = dist if dist is not None else read_cloud(entry.dist, job.bit_depth)
    result = PairResult()

    if job.point_metrics:
        for score in point_metric_rows(
            ref,
            dist,
            bit_depth=job.bit_depth,
            peak=job.peak,
            normal_k=job.normal_k,
            direction=job.direction,
        ):
            result.metric_rows.append(MetricFlatExport(**sample_columns(entry), metric=score.name, value=score.value))

    for metric in job.projection_metrics:
        scores = projection_view_scores(
            ref,
            dist,
            metric,
            gamma=job.gamma,
            splat_radius=job.splat_radius,
            background=job.background,
            resolution=job.resolution,
            masked=job.masked,
        )
        result.projection_rows.extend(projection_rows(entry, scores, POOLING_MODES))

    logger.info("Scored %s", entry.sample_id)
    return result


def run_batch(jobs: Sequence[PairJob], workers: int = 1) -> PairResult:
    """Score every pair on a worker pool; rows are sorted by sample and metric.

    The output does not depend on the worker count.
    """
    results = parallel_map(score_pair, jobs, workers)
    merged = PairResult()
    for result in results:
        merged.metric_rows.extend(result.metric_rows)
        merged.projection_rows.extend(result.projection_rows)
    merged.metric_rows.sort(key=lambda r: (r.sample_id, r.metric))
    merged.projection_rows.sort(key=lambda r: (r.sample_id, r.metric, r.pooling))
    return merged
