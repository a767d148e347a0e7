"""Tests for result table export."""

import csv
import io
import json
import math

import pytest
import yaml
from openpyxl import load_workbook

from pcqa.exceptions import DataError
from pcqa.schemas.export import DmosFlatExport, ExportFormat, MetricFlatExport, headers_of
from pcqa.services.export_service import (
    export_rows_to_csv,
    export_rows_to_json,
    export_rows_to_xlsx,
    export_rows_to_yaml,
    render_rows,
    write_table,
)


@pytest.fixture
def metric_rows() -> list[MetricFlatExport]:
    return [
        MetricFlatExport(sample_id="vase_g1_t1", sequence="vase", gqp=1, tqp=1, metric="psnr_d1", value=61.23456),
        MetricFlatExport(sample_id="vase_g1_t1", sequence="vase", gqp=1, tqp=1, metric="psnr_y", value=math.inf),
        MetricFlatExport(sample_id="vase_g2_t1", sequence="vase", gqp=2, tqp=1, metric="d1_mse", value=-0.00001),
    ]


class TestCsvExport:
    """Test CSV rendering."""

    def test_headers_follow_schema(self, metric_rows):
        """Test the header row is the schema's field order."""
        content = export_rows_to_csv(metric_rows).decode()
        assert content.splitlines()[0] == "sample_id,sequence,gqp,tqp,metric,value"

    def test_full_precision_by_default(self, metric_rows):
        """Test floats are written with repr precision."""
        rows = list(csv.DictReader(io.StringIO(export_rows_to_csv(metric_rows).decode())))
        assert rows[0]["value"] == "61.23456"

    def test_fixed_decimals(self, metric_rows):
        """Test decimals round and negative zero is normalized."""
        rows = list(csv.DictReader(io.StringIO(export_rows_to_csv(metric_rows, decimals=4).decode())))
        assert rows[0]["value"] == "61.2346"
        assert rows[2]["value"] == "0.0000"

    def test_infinity_sentinel(self, metric_rows):
        """Test infinite PSNR is written as inf."""
        rows = list(csv.DictReader(io.StringIO(export_rows_to_csv(metric_rows).decode())))
        assert rows[1]["value"] == "inf"

    def test_none_and_flags(self):
        """Test None is an empty cell and flag lists are joined with semicolons."""
        row = DmosFlatExport(sample_id="s1", dmos=None, n_subjects=5, flags=["grubbs", "subject_outlier"])
        line = export_rows_to_csv([row]).decode().splitlines()[1]
        assert line == "s1,,5,grubbs;subject_outlier,,,"

    def test_empty_with_schema(self):
        """Test an empty table still gets a header."""
        assert export_rows_to_csv([], schema=MetricFlatExport).decode() == "sample_id,sequence,gqp,tqp,metric,value\n"

    def test_empty_without_schema(self):
        """Test headers cannot be inferred from nothing."""
        with pytest.raises(DataError):
            export_rows_to_csv([])


class TestDocumentExport:
    """Test JSON, YAML and XLSX rendering."""

    def test_json_document(self, metric_rows):
        """Test rows under the key plus export_info."""
        data = json.loads(export_rows_to_json(metric_rows, "metrics", parameters={"direction": "symmetric"}))
        assert len(data["metrics"]) == 3
        assert data["metrics"][1]["value"] == "inf"
        info = data["export_info"]
        assert info["total_count"] == 3
        assert info["format"] == "json"
        assert info["generator"].startswith("pcqa ")
        assert info["parameters"] == {"direction": "symmetric"}
        assert "exported_at" not in info

    def test_yaml_document(self, metric_rows):
        """Test YAML carries the same rows and metadata."""
        data = yaml.safe_load(export_rows_to_yaml(metric_rows, "metrics", decimals=2))
        assert data["metrics"][0]["value"] == 61.23
        assert data["export_info"]["format"] == "yaml"

    def test_xlsx_workbook(self, metric_rows):
        """Test the sheet has a header row and one row per record."""
        wb = load_workbook(io.BytesIO(export_rows_to_xlsx(metric_rows, "metrics")))
        ws = wb.active
        assert ws.title == "metrics"
        assert [c.value for c in ws[1]] == headers_of(MetricFlatExport)
        assert ws.max_row == 4
        assert ws.freeze_panes == "A2"

    def test_render_dispatch(self, metric_rows):
        """Test render_rows picks the writer by format."""
        assert render_rows(metric_rows, ExportFormat.CSV, "metrics") == export_rows_to_csv(metric_rows)
        assert render_rows(metric_rows, ExportFormat.JSON, "metrics") == export_rows_to_json(metric_rows, "metrics")


class TestWriteTable:
    """Test writing tables to disk."""

    def test_one_file_per_format(self, tmp_path, metric_rows):
        """Test stem.<ext> files are written in the order of the formats."""
        paths = write_table(metric_rows, tmp_path / "out", "metrics", [ExportFormat.JSON, ExportFormat.CSV])
        assert [p.name for p in paths] == ["metrics.json", "metrics.csv"]
        assert all(p.exists() for p in paths)

    def test_rewrite_is_identical(self, tmp_path, metric_rows):
        """Test output carries no timestamps."""
        first = write_table(metric_rows, tmp_path, "m", [ExportFormat.JSON])[0].read_bytes()
        second = write_table(metric_rows, tmp_path, "m", [ExportFormat.JSON])[0].read_bytes()
        assert first == second
