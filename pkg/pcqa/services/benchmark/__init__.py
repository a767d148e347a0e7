"""Logistic mapping, metric-to-DMOS agreement and report tables."""

from pcqa.services.benchmark.evaluation import compare_pooling, evaluate_metric, finite_pairs, gamma_sweep
from pcqa.services.benchmark.logistic import fit_logistic, initial_params, logistic
from pcqa.services.benchmark.reporting import generate_report, write_gains, write_sweep
from pcqa.services.benchmark.runner import check_sample_ids, higher_is_better, run_benchmark

__all__ = [
    "check_sample_ids",
    "compare_pooling",
    "evaluate_metric",
    "finite_pairs",
    "fit_logistic",
    "gamma_sweep",
    "generate_report",
    "higher_is_better",
    "initial_params",
    "logistic",
    "run_benchmark",
    "write_gains",
    "write_sweep",
]
