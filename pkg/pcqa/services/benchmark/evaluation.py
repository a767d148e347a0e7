"""Agreement of objective metrics with DMOS after logistic mapping."""

import logging
from collections.abc import Iterable, Sequence

import numpy as np

from pcqa.exceptions import DataError
from pcqa.models.report import SESSION_ORDER, BenchmarkRow, GainRow, GammaSweepRow, Session
from pcqa.models.scores import ViewScores
from pcqa.services.benchmark.logistic import (
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
    MIN_POINTS,
    fit_logistic,
    logistic,
)
from pcqa.services.stats_core import krocc, plcc, rmse, srocc
from pcqa.services.view_pooling import RECOMMENDED_GAMMA, pool_views

logger = logging.getLogger(__name__)

GAIN_COLUMNS = ("plcc", "srocc", "krocc", "rmse")
AVERAGE_ROW = "Average"
RATIO_ROW = "Ratio"


def finite_pairs(x, y) -> tuple[np.ndarray, np.ndarray]:
    """Drop pairs where either value is not finite (infinite PSNR sentinels)."""
    xs = np.asarray(x, dtype=np.float64).reshape(-1)
    ys = np.asarray(y, dtype=np.float64).reshape(-1)
    if xs.shape != ys.shape:
        raise DataError(f"objective and subjective scores differ in length: {xs.size} vs {ys.size}")
    keep = np.isfinite(xs) & np.isfinite(ys)
    dropped = int((~keep).sum())
    if dropped:
        logger.info("Excluded %d non-finite score pairs", dropped)
    return xs[keep], ys[keep]


def evaluate_metric(
    x,
    y,
    metric: str,
    session: Session = "all",
    pooling: str = "",
    gamma: float | None = None,
    higher_is_better: bool = True,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tolerance: float = DEFAULT_TOLERANCE,
) -> BenchmarkRow:
    """Fit the logistic map and score a metric against DMOS.

    PLCC and RMSE compare q(x) with y; SROCC and KROCC use the raw scores.
    The rank correlations are reported as magnitudes so that metrics where
    lower is better read on the same scale.

    Raises:
        DataError: Fewer than five finite pairs remain.
    """
    xs, ys = finite_pairs(x, y)
    if xs.size < MIN_POINTS:
        raise DataError(f"{metric}: need at least {MIN_POINTS} finite score pairs, got {xs.size}")

    params = fit_logistic(xs, ys, max_iterations, tolerance)
    predicted = logistic(xs, params)
    row = BenchmarkRow(
        session=session,
        metric=metric,
        pooling=pooling,
        gamma=gamma,
        plcc=plcc(predicted, ys),
        srocc=abs(srocc(xs, ys)),
        krocc=abs(krocc(xs, ys)),
        rmse=rmse(predicted, ys),
        n=int(xs.size),
        params=params,
        higher_is_better=higher_is_better,
    )
    logger.debug("%s/%s: PLCC=%.4f SROCC=%.4f n=%d", session, metric, row.plcc, row.srocc, row.n)
    return row


def _gain_key(row: BenchmarkRow) -> tuple[str, str]:
    return (row.session, row.metric)


def compare_pooling(mean_rows: Iterable[BenchmarkRow], weighted_rows: Iterable[BenchmarkRow]) -> list[GainRow]:
    """Weighted-minus-mean differences per metric, with Average and Ratio rows per session.

    Ratio is the average gain divided by the average mean-pooled value, so
    0.05 means a 5 % relative improvement.

    Raises:
        DataError: A metric appears in only one of the two inputs.
    """
    mean_by_key = {_gain_key(row): row for row in mean_rows}
    weighted_by_key = {_gain_key(row): row for row in weighted_rows}
    orphans = sorted(set(mean_by_key) ^ set(weighted_by_key))
    if orphans:
        session, metric = orphans[0]
        raise DataError(f"metric {metric!r} in session {session!r} lacks a counterpart pooling row")

    keys = sorted(mean_by_key, key=lambda k: (SESSION_ORDER[k[0]], k[1]))
    result: list[GainRow] = []
    for session in sorted({k[0] for k in keys}, key=SESSION_ORDER.__getitem__):
        session_keys = [k for k in keys if k[0] == session]
        gains = []
        for key in session_keys:
            gain = {c: getattr(weighted_by_key[key], c) - getattr(mean_by_key[key], c) for c in GAIN_COLUMNS}
            gains.append(gain)
            result.append(GainRow(session=session, metric=key[1], **gain))

        average = {c: float(np.mean([g[c] for g in gains])) for c in GAIN_COLUMNS}
        baseline = {c: float(np.mean([getattr(mean_by_key[k], c) for k in session_keys])) for c in GAIN_COLUMNS}
        ratio = {c: (average[c] / baseline[c] if baseline[c] != 0 else float("nan")) for c in GAIN_COLUMNS}
        result.append(GainRow(session=session, metric=AVERAGE_ROW, **average))
        result.append(GainRow(session=session, metric=RATIO_ROW, **ratio))
    return result


def gamma_sweep(
    per_view_scores: Sequence[ViewScores],
    dmos: Sequence[float],
    gammas: Iterable[float],
    recommended: tuple[float, float] = RECOMMENDED_GAMMA,
) -> list[GammaSweepRow]:
    """PLCC and SROCC of weighted pooling over a grid of gamma values.

    The row with the highest PLCC is flagged ``best``; ties go to the
    smaller gamma.
    """
    if len(per_view_scores) != len(dmos):
        raise DataError(f"{len(per_view_scores)} view score sets for {len(dmos)} DMOS values")
    low, high = recommended
    rows = []
    for gamma in sorted(set(float(g) for g in gammas)):
        if not 0.0 <= gamma <= 1.0:
            raise DataError(f"gamma must lie in [0, 1], got {gamma}")
        pooled = [pool_views(v.model_copy(update={"gamma": gamma})) for v in per_view_scores]
        row = evaluate_metric(pooled, dmos, metric="sweep", pooling="weighted", gamma=gamma)
        rows.append(
            GammaSweepRow(
                gamma=gamma,
                plcc=row.plcc,
                srocc=row.srocc,
                n=row.n,
                in_recommended=low <= gamma <= high,
            )
        )
    if not rows:
        raise DataError("gamma grid is empty")

    best = max(range(len(rows)), key=lambda i: (rows[i].plcc, -rows[i].gamma))
    rows[best] = rows[best].model_copy(update={"best": True})
    logger.info(
        "Best gamma %.3f (PLCC %.4f), %s the recommended interval",
        rows[best].gamma,
        rows[best].plcc,
        "inside" if rows[best].in_recommended else "outside",
    )
    return rows
