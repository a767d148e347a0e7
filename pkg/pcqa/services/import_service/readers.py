"""Readers turning score tables and manifests into domain objects."""

import logging
from pathlib import Path

from pcqa.models.ratings import DmosTable, RatingMatrix
from pcqa.models.report import BenchmarkRow
from pcqa.models.scores import ViewScores
from pcqa.schemas.import_schemas import ManifestEntry, ObjectiveRecord

from .constants import (
    DMOS_COLUMNS,
    MANIFEST_COLUMNS,
    OBJECTIVE_COLUMNS,
    RATINGS_COLUMNS,
    REPORT_COLUMNS,
    VIEW_SCORE_COLUMNS,
)
from .converters import (
    convert_rows,
    manifest_converter,
    row_to_dmos,
    row_to_objective,
    row_to_rating,
    row_to_report,
    row_to_view_scores,
)
from .parsers import read_table

logger = logging.getLogger(__name__)


def read_ratings(path: Path | str) -> RatingMatrix:
    """Ratings table (`subject_id,sample_id,sequence,gqp,tqp,score`) as a RatingMatrix."""
    path = Path(path)
    records = convert_rows(read_table(path, RATINGS_COLUMNS), row_to_rating, path.name)
    matrix = RatingMatrix.from_records(records)
    logger.info(
        "Read %d ratings from %d subjects over %d samples",
        len(records),
        len(matrix.subjects),
        len(matrix.samples),
    )
    return matrix


def read_dmos(path: Path | str) -> DmosTable:
    """DMOS table as written by ``pcqa dmos``; rejected samples have an empty dmos."""
    path = Path(path)
    rows = convert_rows(read_table(path, DMOS_COLUMNS), row_to_dmos, path.name)
    return DmosTable(rows=rows)


def read_objective(path: Path | str) -> list[ObjectiveRecord]:
    """Objective scores in long form: one (sample_id, metric, value) per row.

    Projection metric CSVs are accepted as they are: ``s_final`` is read as
    the value and the ``pooling`` and ``gamma`` columns are kept.
    """
    path = Path(path)
    return convert_rows(read_table(path, OBJECTIVE_COLUMNS), row_to_objective, path.name)


def read_view_scores(path: Path | str, metric: str | None = None) -> list[tuple[str, ViewScores]]:
    """Per-view scores from a projection metric CSV, optionally for one metric only."""
    path = Path(path)
    rows = read_table(path, VIEW_SCORE_COLUMNS)
    if metric is not None:
        rows = [row for row in rows if row.get("metric", metric) == metric]
    return convert_rows(rows, row_to_view_scores, path.name)


def read_manifest(path: Path | str) -> list[ManifestEntry]:
    """Batch manifest (`ref,dist[,sample_id,sequence,gqp,tqp]`); paths relative to the manifest."""
    path = Path(path)
    rows = read_table(path, MANIFEST_COLUMNS)
    return convert_rows(rows, manifest_converter(path.parent), path.name)


def read_report(path: Path | str) -> list[BenchmarkRow]:
    """Benchmark rows from a report CSV written by ``pcqa benchmark``."""
    path = Path(path)
    return convert_rows(read_table(path, REPORT_COLUMNS), row_to_report, path.name)
