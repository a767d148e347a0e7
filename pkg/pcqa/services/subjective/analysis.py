"""Summaries of processed DMOS: quantization-level means and session agreement."""

import logging
from collections import defaultdict

import numpy as np

from pcqa.exceptions import DataError, ZeroVarianceError
from pcqa.models.ratings import DmosTable, QpLevelRow, SessionAgreement
from pcqa.services.benchmark.logistic import MIN_POINTS, fit_logistic, logistic

logger = logging.getLogger(__name__)


def qp_level_summary(table: DmosTable) -> list[QpLevelRow]:
    """Mean DMOS at every gQP level and at every tQP level, over retained samples.

    Rows list the gqp levels first, then the tqp levels, each ascending.
    """
    retained = table.retained
    if not retained:
        raise DataError("no retained DMOS values to summarize")
    rows = []
    for factor in ("gqp", "tqp"):
        levels: dict[int, list[float]] = defaultdict(list)
        for row in retained:
            levels[getattr(row, factor)].append(row.dmos)
        for level in sorted(levels):
            values = levels[level]
            rows.append(QpLevelRow(factor=factor, level=level, mean_dmos=float(np.mean(values)), n=len(values)))
    return rows


def setup_means(table: DmosTable) -> dict[tuple[int, int], float]:
    """Mean DMOS per (gqp, tqp) setup across sequences."""
    setups: dict[tuple[int, int], list[float]] = defaultdict(list)
    for row in table.retained:
        setups[(row.gqp, row.tqp)].append(row.dmos)
    return {key: float(np.mean(values)) for key, values in setups.items()}


def _r_squared(predicted: np.ndarray, observed: np.ndarray) -> float:
    sst = float(np.sum((observed - observed.mean()) ** 2))
    if sst == 0:
        raise ZeroVarianceError("R^2 is undefined for constant observations")
    return 1.0 - float(np.sum((observed - predicted) ** 2)) / sst


def session_agreement(human: DmosTable, objects: DmosTable) -> SessionAgreement:
    """How well the per-setup DMOS of one session explains the other.

    Setups present in both sessions are paired; the human-session mean is
    the regressor. Reports R^2 of a straight line and of the logistic map.

    Raises:
        DataError: Fewer than five shared setups.
    """
    human_means, object_means = setup_means(human), setup_means(objects)
    shared = sorted(set(human_means) & set(object_means))
    if len(shared) < MIN_POINTS:
        raise DataError(f"sessions share {len(shared)} encoding setups; need at least {MIN_POINTS}")
    x = np.array([human_means[k] for k in shared])
    y = np.array([object_means[k] for k in shared])

    slope, intercept = np.polyfit(x, y, 1)
    r2_linear = _r_squared(slope * x + intercept, y)
    params = fit_logistic(x, y)
    r2_logistic = _r_squared(logistic(x, params), y)

    logger.info("Session agreement over %d setups: R2 linear %.4f, logistic %.4f", len(shared), r2_linear, r2_logistic)
    return SessionAgreement(n_setups=len(shared), r2_linear=r2_linear, r2_logistic=r2_logistic)
