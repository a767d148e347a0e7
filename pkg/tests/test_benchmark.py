"""Tests for the logistic fit, metric evaluation and benchmark reports."""

import json
import math

import numpy as np
import pytest

from pcqa.exceptions import DataError
from pcqa.models.ratings import DmosRow, DmosTable
from pcqa.models.report import BenchmarkRow
from pcqa.models.scores import LogisticParams, ViewScores
from pcqa.schemas.import_schemas import ObjectiveRecord
from pcqa.services.benchmark import (
    compare_pooling,
    evaluate_metric,
    fit_logistic,
    gamma_sweep,
    generate_report,
    higher_is_better,
    logistic,
    run_benchmark,
)
from pcqa.services.benchmark.logistic import SLOPE_RESTARTS, initial_params

TRUE_BETA = (2.0, 1.2, 5.0, 0.05, 0.5)


def bench_row(metric: str, plcc: float, session: str = "all", pooling: str = "mean") -> BenchmarkRow:
    return BenchmarkRow(
        session=session,
        metric=metric,
        pooling=pooling,
        plcc=plcc,
        srocc=plcc,
        krocc=plcc / 2,
        rmse=1.0 - plcc,
        n=10,
        params=LogisticParams(b1=1, b2=1, b3=0, b4=0, b5=0),
    )


def dmos_table(n: int = 12) -> DmosTable:
    """Samples s0..s(n-1) with increasing DMOS; the first half from sequence 'a'."""
    return DmosTable(
        rows=[
            DmosRow(sample_id=f"s{i}", sequence="a" if i < n // 2 else "b", gqp=1, tqp=1, dmos=0.1 + 0.8 * i / (n - 1))
            for i in range(n)
        ]
    )


def objective(values, metric: str = "psnr_d1", **extra) -> list[ObjectiveRecord]:
    return [ObjectiveRecord(sample_id=f"s{i}", metric=metric, value=v, **extra) for i, v in enumerate(values)]


class TestLogisticFit:
    """Test the five-parameter logistic regression."""

    def test_recovers_exact_curve(self):
        """Test noiseless samples of the model are fitted almost exactly."""
        x = np.linspace(0, 10, 50)
        y = logistic(x, np.array(TRUE_BETA))
        params = fit_logistic(x, y)
        assert math.sqrt(params.sse / x.size) < 1e-5
        assert params.converged

    def test_noisy_curve(self, rng):
        """Test small noise still gives a near-perfect linear correlation."""
        x = np.linspace(0, 10, 50)
        y = logistic(x, np.array(TRUE_BETA)) + rng.normal(0, 0.02, size=x.size)
        predicted = logistic(x, fit_logistic(x, y))
        assert np.corrcoef(predicted, y)[0, 1] > 0.99

    def test_never_worse_than_a_line(self):
        """Test affine data is fitted with zero error."""
        x = np.arange(10.0)
        params = fit_logistic(x, 0.3 * x + 1.0)
        assert params.sse == pytest.approx(0.0, abs=1e-12)

    def test_starting_point(self):
        """Test the start uses range, signed inverse spread, median, line slope and mean."""
        start = initial_params(np.array([0.0, 1, 2, 3, 4]), np.array([5.0, 3, 4, 1, 0]))
        assert start.tolist() == pytest.approx([5.0, -1.0, 2.0, -1.2, 2.6])
        assert SLOPE_RESTARTS == (1.0, 4.0, 0.25)

    def test_too_few_points(self):
        """Test fewer than five points are rejected."""
        with pytest.raises(DataError, match="at least 5"):
            fit_logistic([1, 2, 3, 4], [1, 2, 3, 4])

    def test_constant_scores(self):
        """Test constant objective scores cannot be mapped."""
        with pytest.raises(DataError):
            fit_logistic([1.0] * 6, [0.1, 0.2, 0.3, 0.4, 0.5, 0.6])

    def test_non_finite(self):
        """Test infinite scores are rejected."""
        with pytest.raises(DataError):
            fit_logistic([1, 2, 3, 4, math.inf], [1, 2, 3, 4, 5])


class TestEvaluateMetric:
    """Test agreement of one metric with DMOS."""

    def test_monotone_metric(self):
        """Test a monotone metric has rank correlations of one."""
        x = np.linspace(20, 60, 15)
        y = 1.0 / (1.0 + np.exp((x - 40) / 5))
        row = evaluate_metric(x, y, metric="psnr_d1")
        assert row.srocc == pytest.approx(1.0)
        assert row.krocc == pytest.approx(1.0)
        assert row.plcc > 0.99
        assert row.n == 15

    def test_lower_is_better_reported_as_magnitude(self):
        """Test a decreasing metric still reports positive rank correlations."""
        x = np.arange(10.0)
        row = evaluate_metric(x, 1.0 - x / 20, metric="gmsd", higher_is_better=False)
        assert row.srocc == pytest.approx(1.0)
        assert row.higher_is_better is False

    def test_infinite_scores_excluded(self):
        """Test +inf PSNR sentinels are dropped before fitting."""
        x = [math.inf, 10, 20, 30, 40, 50, 60]
        y = [0.05, 0.9, 0.7, 0.5, 0.4, 0.3, 0.2]
        assert evaluate_metric(x, y, metric="psnr_y").n == 6

    def test_too_few_finite_pairs(self):
        """Test fewer than five finite pairs are rejected."""
        with pytest.raises(DataError):
            evaluate_metric([math.inf, 1, 2, 3, 4], [0.1, 0.2, 0.3, 0.4, 0.5], metric="psnr_y")

    def test_direction_by_name(self):
        """Test errors are lower-is-better and PSNRs higher-is-better."""
        assert higher_is_better("d1_mse") is False
        assert higher_is_better("d2_hausdorff") is False
        assert higher_is_better("psnr_d1") is True
        assert higher_is_better("gmsd") is False


class TestComparePooling:
    """Test weighted-minus-mean gain tables."""

    def test_gains_average_and_ratio(self):
        """Test per-metric differences followed by Average and Ratio rows."""
        gains = compare_pooling(
            [bench_row("ssim", 0.8), bench_row("psnr", 0.6)],
            [bench_row("ssim", 0.9, pooling="weighted"), bench_row("psnr", 0.66, pooling="weighted")],
        )
        assert [g.metric for g in gains] == ["psnr", "ssim", "Average", "Ratio"]
        assert gains[0].plcc == pytest.approx(0.06)
        assert gains[2].plcc == pytest.approx(0.08)
        assert gains[3].plcc == pytest.approx(0.08 / 0.7)

    def test_sessions_kept_apart(self):
        """Test every session gets its own Average and Ratio rows."""
        gains = compare_pooling(
            [bench_row("ssim", 0.8, "human"), bench_row("ssim", 0.7, "object")],
            [bench_row("ssim", 0.85, "human", "weighted"), bench_row("ssim", 0.8, "object", "weighted")],
        )
        assert [(g.session, g.metric) for g in gains] == [
            ("human", "ssim"),
            ("human", "Average"),
            ("human", "Ratio"),
            ("object", "ssim"),
            ("object", "Average"),
            ("object", "Ratio"),
        ]

    def test_orphan_metric(self):
        """Test a metric without its counterpart is an error."""
        with pytest.raises(DataError, match="uqi"):
            compare_pooling([bench_row("ssim", 0.8), bench_row("uqi", 0.5)], [bench_row("ssim", 0.9)])


class TestGammaSweep:
    """Test the gamma grid search."""

    def test_vertical_views_carry_the_signal(self, rng):
        """Test gamma 1 wins when only the vertical views follow DMOS."""
        dmos = np.linspace(0.1, 0.9, 20)
        lateral = rng.normal(0.5, 0.2, size=(20, 4))
        views = [
            ViewScores(
                s_front=lat[0], s_back=lat[1], s_left=lat[2], s_right=lat[3], s_top=10 * d, s_bottom=10 * d, gamma=0.19
            )
            for lat, d in zip(lateral, dmos)
        ]
        rows = gamma_sweep(views, dmos, [0.5, 0.0, 1.0, 0.19])
        assert [r.gamma for r in rows] == [0.0, 0.19, 0.5, 1.0]
        assert [r.best for r in rows] == [False, False, False, True]
        assert [r.in_recommended for r in rows] == [False, True, False, False]
        assert rows[-1].plcc == pytest.approx(1.0, abs=1e-6)

    def test_length_mismatch(self):
        """Test one view score set per DMOS value."""
        with pytest.raises(DataError):
            gamma_sweep([], [0.5], [0.19])


class TestReport:
    """Test report files."""

    def test_csv_and_json(self, tmp_path):
        """Test the report is written as CSV and JSON with fixed columns."""
        rows = [bench_row("ssim", 0.8, "object"), bench_row("psnr", 0.6)]
        csv_path, json_path = generate_report(rows, tmp_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "session,metric,pooling,gamma,plcc,srocc,krocc,rmse,n,b1,b2,b3,b4,b5"
        assert lines[1].startswith("all,psnr,mean,,0.6000,")
        document = json.loads(json_path.read_text())
        assert [r["metric"] for r in document["report"]] == ["psnr", "ssim"]
        assert document["export_info"]["total_count"] == 2

    def test_rerun_is_byte_identical(self, tmp_path):
        """Test writing the same rows twice gives identical files."""
        rows = [bench_row("ssim", 0.812345678), bench_row("psnr", 0.6)]
        first = [p.read_bytes() for p in generate_report(rows, tmp_path / "one")]
        second = [p.read_bytes() for p in generate_report(list(reversed(rows)), tmp_path / "two")]
        assert first == second

    def test_empty_report(self, tmp_path):
        """Test an empty report is an error."""
        with pytest.raises(DataError):
            generate_report([], tmp_path)


class TestRunBenchmark:
    """Test joining objective scores with DMOS."""

    def test_all_session(self):
        """Test one row per metric for the pooled session."""
        table = dmos_table()
        records = objective(np.linspace(50, 30, 12)) + objective(np.linspace(0.1, 2.0, 12), metric="d1_mse")
        report = run_benchmark(records, table)
        assert [(r.session, r.metric) for r in report.rows] == [("all", "d1_mse"), ("all", "psnr_d1")]
        assert report.rows[0].higher_is_better is False
        assert report.rows[1].srocc == pytest.approx(1.0)

    def test_sessions_from_sequences(self):
        """Test per-session rows split samples by sequence."""
        report = run_benchmark(
            objective(np.linspace(50, 30, 12)),
            dmos_table(),
            sessions=("all", "human", "object"),
            human_sequences=["a"],
            object_sequences=["b"],
        )
        assert [(r.session, r.n) for r in report.rows] == [("all", 12), ("human", 6), ("object", 6)]

    def test_unassigned_session(self):
        """Test a sample outside both sequence lists cannot join a session."""
        with pytest.raises(DataError, match="no session"):
            run_benchmark(objective(np.linspace(50, 30, 12)), dmos_table(), sessions=("human",), human_sequences=["a"])

    def test_orphan_objective_score(self):
        """Test a scored sample missing from the DMOS table is named."""
        records = objective(np.linspace(50, 30, 12)) + [ObjectiveRecord(sample_id="X", metric="psnr_d1", value=1.0)]
        with pytest.raises(DataError, match="sample_id 'X' has objective scores but no DMOS row"):
            run_benchmark(records, dmos_table())

    def test_rejected_samples_skipped(self):
        """Test samples without DMOS are left out of the fit."""
        table = dmos_table()
        table.rows.append(DmosRow(sample_id="s12", flags=["grubbs"]))
        report = run_benchmark(objective(np.linspace(50, 28, 13)), table)
        assert report.rows[0].n == 12

    def test_workers_do_not_change_results(self):
        """Test the report is identical with one or two workers."""
        records = objective(np.linspace(50, 30, 12)) + objective(np.linspace(0.1, 2.0, 12), metric="d1_mse")
        serial = run_benchmark(records, dmos_table(), workers=1)
        parallel = run_benchmark(records, dmos_table(), workers=2)
        assert serial == parallel
