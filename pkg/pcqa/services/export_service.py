"""Writers for result tables in CSV, JSON, YAML and XLSX."""

import csv
import io
import json
import logging
import math
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import yaml
from openpyxl import Workbook
from openpyxl.styles import Alignment, Font, PatternFill
from openpyxl.utils import get_column_letter
from pydantic import BaseModel

from pcqa.exceptions import DataError
from pcqa.schemas.export import ExportFormat, ExportMetadata, headers_of

logger = logging.getLogger(__name__)

FLAG_SEPARATOR = ";"


def _format_float(value: float, decimals: int | None) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if decimals is None:
        return repr(value)
    text = f"{value:.{decimals}f}"
    # Avoid "-0.0000" after rounding
    return text[1:] if text.startswith("-") and float(text) == 0 else text


def _format_cell(value: Any, decimals: int | None) -> str:
    """Render one value for CSV."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _format_float(value, decimals)
    if isinstance(value, list):
        return FLAG_SEPARATOR.join(str(v) for v in value)
    return str(value)


def _plain_value(value: Any, decimals: int | None) -> Any:
    """Render one value for JSON/YAML: rounded floats, non-finite as strings."""
    if isinstance(value, float):
        if not math.isfinite(value):
            return _format_float(value, decimals)
        return float(_format_float(value, decimals)) if decimals is not None else value
    return value


def _row_to_cells(row: BaseModel, headers: list[str], decimals: int | None) -> list[str]:
    """Convert a flat export schema to a row for CSV."""
    return [_format_cell(getattr(row, h), decimals) for h in headers]


def _row_to_dict(row: BaseModel, headers: list[str], decimals: int | None) -> dict[str, Any]:
    return {h: _plain_value(getattr(row, h), decimals) for h in headers}


def _headers(rows: Sequence[BaseModel], schema: type[BaseModel] | None) -> list[str]:
    if schema is not None:
        return headers_of(schema)
    if not rows:
        raise DataError("cannot infer headers from an empty table without a schema")
    return headers_of(type(rows[0]))


def export_rows_to_csv(
    rows: Sequence[BaseModel],
    schema: type[BaseModel] | None = None,
    decimals: int | None = None,
) -> bytes:
    """Export flat rows to CSV format.

    Args:
        rows: Flat export schemas, all of one type
        schema: Row type; required when rows may be empty
        decimals: Fixed decimals for floats, or None for full precision

    Returns:
        CSV content as bytes
    """
    headers = _headers(rows, schema)
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")

    writer.writerow(headers)
    for row in rows:
        writer.writerow(_row_to_cells(row, headers, decimals))

    return output.getvalue().encode("utf-8")


def export_rows_to_xlsx(
    rows: Sequence[BaseModel],
    title: str,
    schema: type[BaseModel] | None = None,
    decimals: int | None = None,
) -> bytes:
    """Export flat rows to Excel (XLSX) format with a styled, frozen header."""
    headers = _headers(rows, schema)
    wb = Workbook()
    ws = wb.active
    ws.title = title[:31]

    header_font = Font(bold=True, color="FFFFFF")
    header_fill = PatternFill(start_color="1A4A8B", end_color="1A4A8B", fill_type="solid")
    header_alignment = Alignment(horizontal="center")

    for col_idx, header in enumerate(headers, 1):
        cell = ws.cell(row=1, column=col_idx, value=header)
        cell.font = header_font
        cell.fill = header_fill
        cell.alignment = header_alignment

    for row_idx, row in enumerate(rows, 2):
        for col_idx, value in enumerate(_row_to_dict(row, headers, decimals).values(), 1):
            if isinstance(value, list):
                value = FLAG_SEPARATOR.join(value)
            ws.cell(row=row_idx, column=col_idx, value=value)

    # Auto-adjust column widths
    for col_idx, header in enumerate(headers, 1):
        col_letter = get_column_letter(col_idx)
        max_length = len(header)
        for row_idx in range(2, len(rows) + 2):
            cell_value = ws.cell(row=row_idx, column=col_idx).value
            if cell_value is not None:
                max_length = max(max_length, len(str(cell_value)))
        ws.column_dimensions[col_letter].width = min(max_length + 2, 50)

    ws.freeze_panes = "A2"

    output = io.BytesIO()
    wb.save(output)
    return output.getvalue()


def _document(
    rows: Sequence[BaseModel],
    key: str,
    export_format: ExportFormat,
    schema: type[BaseModel] | None,
    decimals: int | None,
    parameters: dict[str, Any] | None,
) -> dict[str, Any]:
    headers = _headers(rows, schema)
    return {
        key: [_row_to_dict(row, headers, decimals) for row in rows],
        "export_info": ExportMetadata(
            total_count=len(rows),
            format=export_format.value,
            parameters=parameters or {},
        ).model_dump(mode="json"),
    }


def export_rows_to_yaml(
    rows: Sequence[BaseModel],
    key: str,
    schema: type[BaseModel] | None = None,
    decimals: int | None = None,
    parameters: dict[str, Any] | None = None,
) -> bytes:
    """Export flat rows to YAML with an export_info block."""
    document = _document(rows, key, ExportFormat.YAML, schema, decimals, parameters)
    return yaml.dump(document, default_flow_style=False, allow_unicode=True, sort_keys=False).encode("utf-8")


def export_rows_to_json(
    rows: Sequence[BaseModel],
    key: str,
    schema: type[BaseModel] | None = None,
    decimals: int | None = None,
    parameters: dict[str, Any] | None = None,
) -> bytes:
    """Export flat rows to JSON with an export_info block; values match the CSV."""
    document = _document(rows, key, ExportFormat.JSON, schema, decimals, parameters)
    return (json.dumps(document, indent=2, allow_nan=False) + "\n").encode("utf-8")


def render_rows(
    rows: Sequence[BaseModel],
    export_format: ExportFormat,
    key: str,
    schema: type[BaseModel] | None = None,
    decimals: int | None = None,
    parameters: dict[str, Any] | None = None,
) -> bytes:
    """Serialize rows in one of the supported formats."""
    if export_format == ExportFormat.CSV:
        return export_rows_to_csv(rows, schema, decimals)
    if export_format == ExportFormat.XLSX:
        return export_rows_to_xlsx(rows, key, schema, decimals)
    if export_format == ExportFormat.YAML:
        return export_rows_to_yaml(rows, key, schema, decimals, parameters)
    return export_rows_to_json(rows, key, schema, decimals, parameters)


def write_table(
    rows: Sequence[BaseModel],
    output_dir: Path | str,
    stem: str,
    formats: Sequence[ExportFormat] = (ExportFormat.CSV,),
    key: str = "rows",
    schema: type[BaseModel] | None = None,
    decimals: int | None = None,
    parameters: dict[str, Any] | None = None,
) -> list[Path]:
    """Write rows as ``<output_dir>/<stem>.<ext>`` for every requested format.

    Returns:
        Written paths, in the order of ``formats``.
    """
    directory = Path(output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for export_format in formats:
        path = directory / f"{stem}.{export_format.value}"
        path.write_bytes(render_rows(rows, export_format, key, schema, decimals, parameters))
        logger.info("Wrote %d rows to %s", len(rows), path)
        paths.append(path)
    return paths
