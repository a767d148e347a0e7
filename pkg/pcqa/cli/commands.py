"""Implementations of the ``pcqa`` subcommands.

Each ``cmd_*`` takes the parsed arguments and the active settings and
returns an exit code. Errors propagate as PcqaError for ``main`` to report.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from pcqa.config.settings import Settings
from pcqa.exceptions import DataError, UsageError
from pcqa.models.cloud import BoundingBox
from pcqa.models.ratings import QpLevelRow, SessionAgreement
from pcqa.models.scores import ViewScores
from pcqa.schemas.export import (
    AnovaFlatExport,
    ContentFlatExport,
    DmosFlatExport,
    ExportFormat,
    MetricFlatExport,
    NormalsSummaryExport,
    ProjectionFlatExport,
)
from pcqa.schemas.import_schemas import ManifestEntry
from pcqa.services.batch import PairJob, run_batch, score_pair
from pcqa.services.benchmark import (
    compare_pooling,
    gamma_sweep,
    generate_report,
    run_benchmark,
    write_gains,
    write_sweep,
)
from pcqa.services.export_service import render_rows, write_table
from pcqa.services.import_service import (
    read_dmos,
    read_manifest,
    read_objective,
    read_ratings,
    read_report,
    read_view_scores,
)
from pcqa.services.ply_io import PlyEncoding, read_cloud, write_cloud
from pcqa.services.point_metrics import estimate_normals
from pcqa.services.preprocess import bounding_box, normalize_to_box, quantize_and_dedup
from pcqa.services.projection import dump_views, project_six_views
from pcqa.services.subjective import (
    balanced_design,
    content_descriptors,
    differential_scores,
    process_ratings,
    qp_level_summary,
    session_agreement,
    two_way_anova,
)

logger = logging.getLogger(__name__)

DEFAULT_SWEEP = tuple(round(0.05 * i, 2) for i in range(21))


def emit_rows(
    rows: Sequence[BaseModel],
    schema: type[BaseModel],
    output: Path | None,
    key: str,
    decimals: int | None = None,
) -> None:
    """Write rows to ``output`` (format from its suffix) or as CSV to stdout."""
    if output is None:
        sys.stdout.write(render_rows(rows, ExportFormat.CSV, key, schema, decimals).decode("utf-8"))
        sys.stdout.flush()
        return
    try:
        export_format = ExportFormat(output.suffix.lstrip(".").lower())
    except ValueError:
        raise UsageError(f"cannot infer an output format from {output.name}; use .csv, .json, .yaml or .xlsx") from None
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_bytes(render_rows(rows, export_format, key, schema, decimals))
    logger.info("Wrote %d rows to %s", len(rows), output)


def _single_entry(args: argparse.Namespace) -> ManifestEntry:
    return ManifestEntry(
        ref=args.ref,
        dist=args.dist,
        sample_id=args.sample_id or Path(args.dist).stem,
        sequence=args.sequence or "",
        gqp=args.gqp,
        tqp=args.tqp,
    )


def _pair_job(settings: Settings, entry: ManifestEntry, point: bool, metrics: Sequence[str]) -> PairJob:
    return PairJob(
        entry=entry,
        bit_depth=settings.metric_bit_depth,
        peak=settings.psnr_peak,
        normal_k=settings.normal_k,
        direction=settings.direction,
        point_metrics=point,
        projection_metrics=tuple(metrics),
        gamma=settings.gamma,
        splat_radius=settings.splat_radius,
        background=settings.background,
        resolution=settings.resolution,
        masked=settings.masked,
    )


def cmd_preprocess(args: argparse.Namespace, settings: Settings) -> int:
    """Quantize to integers, merge duplicates and optionally fit into the target box."""
    cloud = read_cloud(args.input, settings.bit_depth)
    n_in = len(cloud)
    if settings.normalize:
        cloud = normalize_to_box(cloud, BoundingBox.from_size(settings.target_box))
    else:
        cloud = quantize_and_dedup(cloud)
    encoding = PlyEncoding.ASCII if args.ascii else PlyEncoding.BINARY_LE
    write_cloud(args.output, cloud, encoding)
    logger.info("Pre-processed %s: %d points in, %d out", args.input, n_in, len(cloud))
    return 0


def cmd_point_metrics(args: argparse.Namespace, settings: Settings) -> int:
    """D1/D2 MSE and Hausdorff, their PSNRs and YUV PSNR for one pair."""
    job = _pair_job(settings, _single_entry(args), point=True, metrics=())
    result = score_pair(job)
    emit_rows(result.metric_rows, MetricFlatExport, args.output, key="metrics")
    return 0


def cmd_projection_metrics(args: argparse.Namespace, settings: Settings) -> int:
    """Six-view image metrics for one pair, pooled as configured."""
    metrics = args.metric or settings.metrics
    job = _pair_job(settings, _single_entry(args), point=False, metrics=metrics)
    result = score_pair(job)
    rows = [row for row in result.projection_rows if row.pooling == settings.pooling]
    emit_rows(rows, ProjectionFlatExport, args.output, key="projection_metrics")
    return 0


def cmd_project(args: argparse.Namespace, settings: Settings) -> int:
    """Render the six views of a cloud from its own bounding box."""
    cloud = read_cloud(args.input, settings.bit_depth)
    views = project_six_views(
        cloud,
        bounding_box(cloud),
        settings.splat_radius,
        settings.background,
        settings.resolution,
    )
    stem = args.stem or Path(args.input).stem
    dump_views(views, args.dump_dir, stem)
    return 0


def cmd_dmos(args: argparse.Namespace, settings: Settings) -> int:
    """Ratings CSV to DMOS with subject screening and Grubbs' sample rejection."""
    matrix = read_ratings(args.ratings)
    table = process_ratings(matrix, settings.alpha, settings.range_thresh, settings.std_thresh)
    for subject in table.rejected_subjects:
        logger.warning("Rejected subject %s", subject)
    rows = [DmosFlatExport.from_row(row) for row in table.rows]
    output = args.output or settings.output_dir / "dmos.csv"
    emit_rows(rows, DmosFlatExport, output, key="dmos")
    if args.summary:
        summary_path = output.with_name(f"{output.stem}_qp_levels{output.suffix}")
        emit_rows(qp_level_summary(table), QpLevelRow, summary_path, key="qp_levels")
    return 0


def _anova_observations(args: argparse.Namespace) -> np.ndarray:
    if args.ratings:
        matrix = read_ratings(args.input)
        d = differential_scores(matrix)
        records = [
            (sample.gqp, sample.tqp, d[i, j])
            for j, sample in enumerate(matrix.samples)
            for i in range(d.shape[0])
            if not np.isnan(d[i, j])
        ]
    else:
        table = read_dmos(args.input)
        records = [(row.gqp, row.tqp, row.dmos) for row in table.retained]
    data, levels_g, levels_t = balanced_design(records)
    logger.info("ANOVA design: gQP levels %s, tQP levels %s, %d replicates", levels_g, levels_t, data.shape[2])
    return data


def cmd_anova(args: argparse.Namespace, settings: Settings) -> int:
    """Two-way ANOVA of geometry and texture quantization levels."""
    table = two_way_anova(_anova_observations(args))
    rows = [AnovaFlatExport.from_row(row) for row in table.rows]
    emit_rows(rows, AnovaFlatExport, args.output, key="anova", decimals=settings.decimals)
    return 0


def cmd_content(args: argparse.Namespace, settings: Settings) -> int:
    """Spatial information and colorfulness of source clouds."""
    rows = []
    for path in args.inputs:
        cloud = read_cloud(path, settings.bit_depth)
        si, cf = content_descriptors(cloud, settings.splat_radius, settings.background)
        rows.append(ContentFlatExport(name=Path(path).stem, si=si, cf=cf))
    emit_rows(rows, ContentFlatExport, args.output, key="content", decimals=settings.decimals)
    return 0


def _formats(names: Sequence[str] | None) -> list[ExportFormat]:
    return [ExportFormat(name) for name in (names or ("csv", "json"))]


def cmd_benchmark(args: argparse.Namespace, settings: Settings) -> int:
    """Fit every objective metric to DMOS and write the correlation report."""
    records = read_objective(args.objective)
    dmos = read_dmos(args.dmos)
    report = run_benchmark(
        records,
        dmos,
        sessions=args.session or ["all"],
        human_sequences=settings.human_sequences,
        object_sequences=settings.object_sequences,
        max_iterations=settings.max_iterations,
        tolerance=settings.tolerance,
        workers=settings.workers,
    )
    generate_report(report.rows, settings.output_dir, args.stem, _formats(args.format), settings.decimals)
    return 0


def cmd_batch(args: argparse.Namespace, settings: Settings) -> int:
    """Point and projection metrics for every row of a manifest."""
    entries = read_manifest(args.manifest)
    if not entries:
        raise DataError(f"{args.manifest} lists no pairs")
    metrics = () if args.no_projection else (args.metric or settings.metrics)
    jobs = [_pair_job(settings, entry, point=not args.no_point, metrics=metrics) for entry in entries]
    result = run_batch(jobs, settings.workers)

    if not args.no_point:
        write_table(result.metric_rows, settings.output_dir, "point_metrics", schema=MetricFlatExport)
    if metrics:
        write_table(result.projection_rows, settings.output_dir, "projection_metrics", schema=ProjectionFlatExport)
    return 0


def cmd_normals(args: argparse.Namespace, settings: Settings) -> int:
    """Estimate PCA normals and write them with the cloud."""
    cloud = read_cloud(args.input, settings.bit_depth)
    with_normals = estimate_normals(cloud, settings.normal_k, workers=settings.workers)
    low = int(np.count_nonzero(with_normals.low_confidence)) if with_normals.low_confidence is not None else 0
    if low:
        logger.warning("%d of %d normals have low confidence", low, len(cloud))
    encoding = PlyEncoding.ASCII if args.ascii else PlyEncoding.BINARY_LE
    write_cloud(args.output, with_normals, encoding)
    summary = NormalsSummaryExport(name=Path(args.input).stem, points=len(cloud), k=settings.normal_k, low_confidence=low)
    emit_rows([summary], NormalsSummaryExport, None, key="normals")
    return 0


def cmd_gains(args: argparse.Namespace, settings: Settings) -> int:
    """Weighted-minus-mean pooling gains from two benchmark reports."""
    gains = compare_pooling(read_report(args.mean_report), read_report(args.weighted_report))
    write_gains(gains, settings.output_dir, args.stem, _formats(args.format), settings.decimals)
    return 0


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    """Agreement of weighted pooling with DMOS over a gamma grid."""
    view_scores = read_view_scores(args.projection, args.metric)
    dmos = read_dmos(args.dmos).by_sample()
    # Per-view scores repeat once per pooling mode; keep the first per sample
    unique: dict[str, ViewScores] = {}
    for sample_id, scores in view_scores:
        if sample_id not in dmos:
            raise DataError(f"sample_id {sample_id!r} has view scores but no DMOS row")
        unique.setdefault(sample_id, scores)
    kept = [(sid, scores) for sid, scores in unique.items() if dmos[sid].retained]
    gammas = args.gammas or DEFAULT_SWEEP
    rows = gamma_sweep([s for _, s in kept], [dmos[sid].dmos for sid, _ in kept], gammas, settings.gamma_range)
    write_sweep(rows, settings.output_dir, args.stem, _formats(args.format), settings.decimals)
    return 0


def cmd_agreement(args: argparse.Namespace, settings: Settings) -> int:
    """R^2 between per-setup DMOS of two sessions."""
    agreement = session_agreement(read_dmos(args.human), read_dmos(args.objects))
    emit_rows([agreement], SessionAgreement, args.output, key="agreement", decimals=settings.decimals)
    return 0
