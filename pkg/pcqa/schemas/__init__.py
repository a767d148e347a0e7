"""Flat row schemas for result files."""

from pcqa.schemas.export import (
    AnovaFlatExport,
    ContentFlatExport,
    DmosFlatExport,
    ExportFormat,
    ExportMetadata,
    MetricFlatExport,
    NormalsSummaryExport,
    ProjectionFlatExport,
    ReportFlatExport,
    SampleColumns,
    headers_of,
)

__all__ = [
    "AnovaFlatExport",
    "ContentFlatExport",
    "DmosFlatExport",
    "ExportFormat",
    "ExportMetadata",
    "MetricFlatExport",
    "NormalsSummaryExport",
    "ProjectionFlatExport",
    "ReportFlatExport",
    "SampleColumns",
    "headers_of",
]
