"""Correlation coefficients and t/F distribution tails.

Tails and quantiles go through the regularized incomplete beta function
(scipy.special.betainc / betaincinv), so no lookup tables are involved.
"""

import math

import numpy as np
from scipy import special, stats

from pcqa.exceptions import DataError, NumericalError, ZeroVarianceError


def _paired(x, y, minimum: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(x, dtype=np.float64).reshape(-1)
    b = np.asarray(y, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise DataError(f"paired series differ in length: {a.size} vs {b.size}")
    if a.size < minimum:
        raise DataError(f"need at least {minimum} paired values, got {a.size}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DataError("paired series must be finite")
    return a, b


def plcc(x, y) -> float:
    """Pearson linear correlation coefficient."""
    a, b = _paired(x, y, 3)
    da, db = a - a.mean(), b - b.mean()
    ss_a, ss_b = float(np.dot(da, da)), float(np.dot(db, db))
    if ss_a == 0 or ss_b == 0:
        raise ZeroVarianceError("correlation is undefined for a constant series")
    return float(np.clip(np.dot(da, db) / math.sqrt(ss_a * ss_b), -1.0, 1.0))


def rmse(x, y) -> float:
    """Root mean square of x - y."""
    a, b = _paired(x, y, 1)
    return float(np.sqrt(np.mean((a - b) ** 2)))


def rank(values) -> np.ndarray:
    """1-based ranks; tied values share their average rank."""
    return stats.rankdata(np.asarray(values, dtype=np.float64), method="average")


def srocc(x, y) -> float:
    """Spearman rank-order correlation: Pearson correlation of average ranks."""
    a, b = _paired(x, y, 3)
    return plcc(rank(a), rank(b))


def krocc(x, y) -> float:
    """Kendall rank-order correlation, tie-corrected tau-b."""
    a, b = _paired(x, y, 3)
    if np.all(a == a[0]) or np.all(b == b[0]):
        raise ZeroVarianceError("rank correlation is undefined for a constant series")
    tau = stats.kendalltau(a, b, variant="b").statistic
    return float(np.clip(tau, -1.0, 1.0))


def _check_df(*dfs: float) -> None:
    for df in dfs:
        if not df >= 1:
            raise NumericalError(f"degrees of freedom must be >= 1, got {df}")


def _check_probability(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise NumericalError(f"probability must lie in (0, 1), got {p}")


def t_tail(t: float, df: float) -> float:
    """Upper tail P(T > t) of Student's t with df degrees of freedom."""
    _check_df(df)
    if math.isnan(t):
        raise NumericalError("t statistic is NaN")
    half = 0.5 * float(special.betainc(df / 2.0, 0.5, df / (df + t * t)))
    return half if t >= 0 else 1.0 - half


def f_tail(f: float, df1: float, df2: float) -> float:
    """Upper tail P(F > f) of the F distribution."""
    _check_df(df1, df2)
    if math.isnan(f):
        raise NumericalError("F statistic is NaN")
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    return float(special.betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f)))


def t_quantile(p: float, df: float) -> float:
    """t such that t_tail(t, df) == p."""
    _check_df(df)
    _check_probability(p)
    if p > 0.5:
        return -t_quantile(1.0 - p, df)
    if p == 0.5:
        return 0.0
    x = float(special.betaincinv(df / 2.0, 0.5, 2.0 * p))
    return math.sqrt(df * (1.0 - x) / x)


def f_quantile(p: float, df1: float, df2: float) -> float:
    """F such that f_tail(F, df1, df2) == p (upper critical value)."""
    _check_df(df1, df2)
    _check_probability(p)
    x = float(special.betaincinv(df2 / 2.0, df1 / 2.0, p))
    return df2 * (1.0 - x) / (df1 * x)
