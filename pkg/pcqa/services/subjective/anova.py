"""Balanced two-way analysis of variance with interaction."""

import logging
from collections import defaultdict
from collections.abc import Iterable

import numpy as np

from pcqa.exceptions import DataError
from pcqa.models.ratings import AnovaRow, AnovaTable
from pcqa.services.stats_core import f_quantile, f_tail

logger = logging.getLogger(__name__)

SIGNIFICANCE = 0.05


def two_way_anova(
    observations: np.ndarray,
    factor_names: tuple[str, str] = ("Geometry", "Texture"),
) -> AnovaTable:
    """Sum-of-squares decomposition of a balanced (a, b, r) design.

    Args:
        observations: Array indexed by (level of A, level of B, replicate).
        factor_names: Labels of the two factors.

    Returns:
        Rows for A, B, interaction, error and total. F is each effect's mean
        square over the error mean square, p its upper F tail and f_crit the
        critical value at the 0.05 level.

    Raises:
        DataError: Not a 3-D array, fewer than two levels per factor, or
            fewer than two replicates per cell.
    """
    x = np.asarray(observations, dtype=np.float64)
    if x.ndim != 3:
        raise DataError(f"observations must be indexed by (A, B, replicate), got {x.ndim} dimensions")
    a, b, r = x.shape
    if a < 2 or b < 2:
        raise DataError("each factor needs at least two levels")
    if r < 2:
        raise DataError("each cell needs at least two replicates")
    if not np.all(np.isfinite(x)):
        raise DataError("observations must be finite")

    grand = x.mean()
    mean_a = x.mean(axis=(1, 2))
    mean_b = x.mean(axis=(0, 2))
    cell = x.mean(axis=2)

    ss_a = float(b * r * np.sum((mean_a - grand) ** 2))
    ss_b = float(a * r * np.sum((mean_b - grand) ** 2))
    ss_ab = float(r * np.sum((cell - mean_a[:, None] - mean_b[None, :] + grand) ** 2))
    ss_e = float(np.sum((x - cell[:, :, None]) ** 2))
    ss_t = float(np.sum((x - grand) ** 2))

    df_a, df_b = a - 1, b - 1
    df_ab, df_e = df_a * df_b, a * b * (r - 1)
    ms_e = ss_e / df_e

    rows = []
    for source, ss, df in (
        (factor_names[0], ss_a, df_a),
        (factor_names[1], ss_b, df_b),
        ("Interaction", ss_ab, df_ab),
    ):
        ms = ss / df
        if ms == 0:
            f, p = 0.0, 1.0
        elif ms_e == 0:
            f, p = float("inf"), 0.0
        else:
            f = ms / ms_e
            p = f_tail(f, df, df_e)
        rows.append(
            AnovaRow(source=source, ss=ss, df=df, ms=ms, f=f, p=p, f_crit=f_quantile(SIGNIFICANCE, df, df_e))
        )
    rows.append(AnovaRow(source="Error", ss=ss_e, df=df_e, ms=ms_e))
    rows.append(AnovaRow(source="Total", ss=ss_t, df=a * b * r - 1))

    logger.debug("ANOVA over %dx%d cells with %d replicates", a, b, r)
    return AnovaTable(rows=rows)


def balanced_design(records: Iterable[tuple[int, int, float]]) -> tuple[np.ndarray, list[int], list[int]]:
    """Arrange (level_a, level_b, value) records into an (a, b, r) array.

    Levels are sorted ascending; replicates keep their input order.

    Raises:
        DataError: Cells differ in replicate count or a cell is empty.
    """
    cells: dict[tuple[int, int], list[float]] = defaultdict(list)
    for level_a, level_b, value in records:
        cells[(int(level_a), int(level_b))].append(float(value))
    if not cells:
        raise DataError("no observations")

    levels_a = sorted({k[0] for k in cells})
    levels_b = sorted({k[1] for k in cells})
    sizes = {len(cells.get((la, lb), [])) for la in levels_a for lb in levels_b}
    if len(sizes) != 1 or 0 in sizes:
        raise DataError(f"unbalanced design: replicates per cell range over {sorted(sizes)}")

    data = np.array([[cells[(la, lb)] for lb in levels_b] for la in levels_a])
    return data, levels_a, levels_b
