"""Report files for benchmark, gain and sweep tables."""

import logging
from collections.abc import Sequence
from pathlib import Path

from pcqa.exceptions import DataError
from pcqa.models.report import BenchmarkRow, GainRow, GammaSweepRow
from pcqa.schemas.export import ExportFormat, ReportFlatExport
from pcqa.services.export_service import write_table

logger = logging.getLogger(__name__)

REPORT_DECIMALS = 4
REPORT_FORMATS = (ExportFormat.CSV, ExportFormat.JSON)


def generate_report(
    rows: Sequence[BenchmarkRow],
    output_dir: Path | str,
    stem: str = "report",
    formats: Sequence[ExportFormat] = REPORT_FORMATS,
    decimals: int = REPORT_DECIMALS,
) -> list[Path]:
    """Write benchmark rows sorted by (session, metric, pooling, gamma).

    Columns: session,metric,pooling,gamma,plcc,srocc,krocc,rmse,n,b1..b5.
    Re-running on the same rows rewrites the CSV and JSON byte for byte.

    Raises:
        DataError: No rows.
    """
    if not rows:
        raise DataError("report needs at least one row")
    flat = [ReportFlatExport.from_row(row) for row in sorted(rows, key=BenchmarkRow.sort_key)]
    return write_table(
        flat,
        output_dir,
        stem,
        formats,
        key="report",
        schema=ReportFlatExport,
        decimals=decimals,
        parameters={"decimals": decimals},
    )


def write_gains(
    rows: Sequence[GainRow],
    output_dir: Path | str,
    stem: str = "gains",
    formats: Sequence[ExportFormat] = REPORT_FORMATS,
    decimals: int = REPORT_DECIMALS,
) -> list[Path]:
    """Write weighted-minus-mean gains in the order compare_pooling produced them."""
    return write_table(rows, output_dir, stem, formats, key="gains", schema=GainRow, decimals=decimals)


def write_sweep(
    rows: Sequence[GammaSweepRow],
    output_dir: Path | str,
    stem: str = "sweep",
    formats: Sequence[ExportFormat] = REPORT_FORMATS,
    decimals: int = REPORT_DECIMALS,
) -> list[Path]:
    """Write a gamma sweep, one row per gamma."""
    return write_table(rows, output_dir, stem, formats, key="sweep", schema=GammaSweepRow, decimals=decimals)
