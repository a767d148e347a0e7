"""Value objects shared across PCQA services."""

from pcqa.models.cloud import BoundingBox, PointCloud
from pcqa.models.ratings import (
    AnovaRow,
    AnovaTable,
    DmosRow,
    DmosTable,
    QpLevelRow,
    RatingMatrix,
    RatingRecord,
    SampleInfo,
    SessionAgreement,
)
from pcqa.models.report import BenchmarkReport, BenchmarkRow, GainRow, GammaSweepRow
from pcqa.models.scores import ColorError, GeometryError, LogisticParams, MetricScore, ViewScores
from pcqa.models.views import LATERAL_VIEWS, VERTICAL_VIEWS, VIEW_NAMES, View, ViewSet

__all__ = [
    "AnovaRow",
    "AnovaTable",
    "BenchmarkReport",
    "BenchmarkRow",
    "BoundingBox",
    "ColorError",
    "DmosRow",
    "DmosTable",
    "GainRow",
    "GammaSweepRow",
    "GeometryError",
    "LATERAL_VIEWS",
    "LogisticParams",
    "MetricScore",
    "PointCloud",
    "QpLevelRow",
    "RatingMatrix",
    "RatingRecord",
    "SampleInfo",
    "SessionAgreement",
    "VERTICAL_VIEWS",
    "VIEW_NAMES",
    "View",
    "ViewScores",
    "ViewSet",
]
