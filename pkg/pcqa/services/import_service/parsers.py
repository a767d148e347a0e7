"""File parsing functions for CSV and XLSX tables."""

import csv
import io
import logging
from pathlib import Path
from typing import Any

from openpyxl import load_workbook

from pcqa.exceptions import DataError, UsageError

from .constants import HEADER_ALIASES

logger = logging.getLogger(__name__)


def canonical_header(header: str) -> str:
    """Map a header through the alias table; unknown headers pass through lowercased."""
    normalized = header.lower().strip()
    return HEADER_ALIASES.get(normalized, normalized)


def parse_csv(file_content: bytes) -> tuple[list[str], list[dict[str, Any]]]:
    """Parse CSV file content into canonical headers and rows.

    Tries UTF-8 first, falls back to Latin-1.

    Args:
        file_content: Raw CSV file bytes.

    Returns:
        Tuple of (headers, rows) where rows are dicts keyed by canonical header.

    Raises:
        DataError: If the CSV is empty or has no headers.
    """
    reader = None
    for encoding in ("utf-8-sig", "latin-1"):
        try:
            text_stream = io.TextIOWrapper(io.BytesIO(file_content), encoding=encoding, newline="")
            reader = csv.DictReader(text_stream)
            # Force header read to trigger any decode error early
            _ = reader.fieldnames
            break
        except (UnicodeDecodeError, csv.Error):
            reader = None
            continue

    if reader is None or reader.fieldnames is None:
        raise DataError("CSV file has no headers")

    mapping = {h: canonical_header(h) for h in reader.fieldnames if h and h.strip()}
    headers = list(mapping.values())
    if not headers:
        raise DataError("CSV file has no valid headers")

    rows: list[dict[str, Any]] = []
    try:
        for row in reader:
            cleaned = {mapping[h]: str(v).strip() if v else "" for h, v in row.items() if h in mapping}
            if any(v for v in cleaned.values()):
                rows.append(cleaned)
    except (UnicodeDecodeError, csv.Error) as exc:
        raise DataError(f"CSV parse error on line {reader.line_num}: {exc}") from exc

    return headers, rows


def parse_xlsx(file_content: bytes) -> tuple[list[str], list[dict[str, Any]]]:
    """Parse XLSX file content into canonical headers and rows (first sheet only).

    Raises:
        DataError: If the XLSX is empty or has no headers.
    """
    wb = load_workbook(filename=io.BytesIO(file_content), read_only=True, data_only=True)
    ws = wb.active
    if ws is None:
        wb.close()
        raise DataError("XLSX file has no worksheets")

    row_iter = ws.iter_rows(values_only=True)
    try:
        raw_headers = next(row_iter)
    except StopIteration:
        wb.close()
        raise DataError("XLSX file is empty")

    headers = [canonical_header(str(h)) if h is not None else "" for h in raw_headers]
    if not any(headers):
        wb.close()
        raise DataError("XLSX file has no valid headers")

    rows: list[dict[str, Any]] = []
    for row_values in row_iter:
        row_dict: dict[str, Any] = {}
        for j, header in enumerate(headers):
            if not header:
                continue
            val = row_values[j] if j < len(row_values) else None
            row_dict[header] = str(val).strip() if val is not None else ""
        if any(v for v in row_dict.values()):
            rows.append(row_dict)

    wb.close()
    return [h for h in headers if h], rows


def read_table(path: Path | str, required: tuple[str, ...] = ()) -> list[dict[str, Any]]:
    """Read a CSV or XLSX table and check that the required columns are present.

    Raises:
        UsageError: The file does not exist.
        DataError: A required column is missing.
    """
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    content = path.read_bytes()
    headers, rows = parse_xlsx(content) if path.suffix.lower() == ".xlsx" else parse_csv(content)
    missing = [c for c in required if c not in headers]
    if missing:
        raise DataError(f"{path.name}: missing column(s) {', '.join(missing)}")
    logger.debug("Read %d rows from %s", len(rows), path)
    return rows
