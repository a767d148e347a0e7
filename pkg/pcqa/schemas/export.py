"""Pydantic schemas for result tables written as CSV, JSON, YAML or XLSX."""

from enum import Enum
from typing import Any

from pydantic import BaseModel, Field

from pcqa import __version__
from pcqa.models.ratings import AnovaRow, DmosRow
from pcqa.models.report import BenchmarkRow


class ExportFormat(str, Enum):
    """Supported export formats."""

    CSV = "csv"
    XLSX = "xlsx"
    YAML = "yaml"
    JSON = "json"


class SampleColumns(BaseModel):
    """Identity of a distorted sample, prefixed to per-sample rows."""

    sample_id: str
    sequence: str = ""
    gqp: int | None = None
    tqp: int | None = None


class MetricFlatExport(SampleColumns):
    """One objective metric value of one sample."""

    metric: str
    value: float


class ProjectionFlatExport(SampleColumns):
    """Per-view scores of a projection metric and the pooled result."""

    metric: str
    pooling: str
    gamma: float
    s_front: float
    s_back: float
    s_left: float
    s_right: float
    s_top: float
    s_bottom: float
    s_final: float


class DmosFlatExport(BaseModel):
    """DMOS of one sample with its rejection flags."""

    sample_id: str
    dmos: float | None = None
    n_subjects: int
    flags: list[str] = Field(default_factory=list)
    sequence: str = ""
    gqp: int | None = None
    tqp: int | None = None

    @staticmethod
    def from_row(row: DmosRow) -> "DmosFlatExport":
        return DmosFlatExport(
            sample_id=row.sample_id,
            dmos=row.dmos,
            n_subjects=row.n_subjects,
            flags=row.flags,
            sequence=row.sequence,
            gqp=row.gqp,
            tqp=row.tqp,
        )


class ReportFlatExport(BaseModel):
    """One benchmark row with the fitted logistic parameters inlined."""

    session: str
    metric: str
    pooling: str
    gamma: float | None = None
    plcc: float
    srocc: float
    krocc: float
    rmse: float
    n: int
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float

    @staticmethod
    def from_row(row: BenchmarkRow) -> "ReportFlatExport":
        """Flatten a benchmark row.

        Args:
            row: Benchmark row with nested LogisticParams

        Returns:
            ReportFlatExport instance
        """
        return ReportFlatExport(
            session=row.session,
            metric=row.metric,
            pooling=row.pooling,
            gamma=row.gamma,
            plcc=row.plcc,
            srocc=row.srocc,
            krocc=row.krocc,
            rmse=row.rmse,
            n=row.n,
            b1=row.params.b1,
            b2=row.params.b2,
            b3=row.params.b3,
            b4=row.params.b4,
            b5=row.params.b5,
        )


class AnovaFlatExport(BaseModel):
    """One source row of an ANOVA table."""

    source: str
    ss: float
    df: int
    ms: float | None = None
    f: float | None = None
    p: float | None = None
    f_crit: float | None = None

    @staticmethod
    def from_row(row: AnovaRow) -> "AnovaFlatExport":
        return AnovaFlatExport(**row.model_dump())


class ContentFlatExport(BaseModel):
    """Content descriptors of one source cloud."""

    name: str
    si: float
    cf: float


class NormalsSummaryExport(BaseModel):
    """Outcome of normal estimation on one cloud."""

    name: str
    points: int
    k: int
    low_confidence: int


class ExportMetadata(BaseModel):
    """Metadata included in hierarchical exports (JSON, YAML).

    No timestamp is recorded so that re-running on the same inputs yields
    identical files.
    """

    generator: str = f"pcqa {__version__}"
    total_count: int
    format: str
    parameters: dict[str, Any] = Field(default_factory=dict)


def headers_of(schema: type[BaseModel]) -> list[str]:
    """Column order of a flat schema: its declared field order."""
    return list(schema.model_fields)
