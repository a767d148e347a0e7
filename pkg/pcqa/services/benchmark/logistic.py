"""Five-parameter logistic mapping from objective scores to DMOS.

q(x) = b1 * (1/2 - 1 / (1 + exp(b2 * (x - b3)))) + b4 * x + b5
"""

import logging

import numpy as np
from scipy.optimize import least_squares

from pcqa.exceptions import DataError
from pcqa.models.scores import LogisticParams

logger = logging.getLogger(__name__)

MIN_POINTS = 5
DEFAULT_MAX_ITERATIONS = 500
DEFAULT_TOLERANCE = 1e-10
# Slope multipliers tried after the primary start; the lowest SSE wins
SLOPE_RESTARTS = (1.0, 4.0, 0.25)


def _sigmoid_part(beta: np.ndarray, x: np.ndarray) -> np.ndarray:
    arg = np.clip(beta[1] * (x - beta[2]), -700.0, 700.0)
    return 1.0 / (1.0 + np.exp(arg))


def logistic(x, params: LogisticParams | np.ndarray) -> np.ndarray:
    """Evaluate q(x)."""
    beta = np.asarray(params.as_array() if isinstance(params, LogisticParams) else params, dtype=np.float64)
    xs = np.asarray(x, dtype=np.float64)
    return beta[0] * (0.5 - _sigmoid_part(beta, xs)) + beta[3] * xs + beta[4]


def _jacobian(beta: np.ndarray, x: np.ndarray, _y: np.ndarray) -> np.ndarray:
    s = _sigmoid_part(beta, x)
    ds = s * (1.0 - s)
    return np.column_stack(
        [
            0.5 - s,
            beta[0] * ds * (x - beta[2]),
            -beta[0] * ds * beta[1],
            x,
            np.ones_like(x),
        ]
    )


def _residuals(beta: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return logistic(x, beta) - y


def initial_params(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Deterministic starting point.

    b3 = median(x), b1 = range(y), b2 = sign(corr) * 4 / range(x),
    b4 = least-squares slope, b5 = mean(y).
    """
    x_range = float(x.max() - x.min())
    corr = np.corrcoef(x, y)[0, 1] if y.std() > 0 else 1.0
    sign = -1.0 if corr < 0 else 1.0
    slope = float(np.polyfit(x, y, 1)[0])
    return np.array(
        [
            float(y.max() - y.min()),
            sign * 4.0 / x_range,
            float(np.median(x)),
            slope,
            float(y.mean()),
        ]
    )


def fit_logistic(
    x,
    y,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tolerance: float = DEFAULT_TOLERANCE,
) -> LogisticParams:
    """Least-squares fit of q(x) to y with Levenberg-Marquardt and an analytic Jacobian.

    The fitted SSE never exceeds that of the least-squares line, which is
    the nested case b1 = 0. When the optimizer stops on the iteration cap
    the best iterate is returned with ``converged=False``.

    Raises:
        DataError: Fewer than five points, non-finite values or constant x.
    """
    xs = np.asarray(x, dtype=np.float64).reshape(-1)
    ys = np.asarray(y, dtype=np.float64).reshape(-1)
    if xs.shape != ys.shape:
        raise DataError(f"x and y differ in length: {xs.size} vs {ys.size}")
    if xs.size < MIN_POINTS:
        raise DataError(f"logistic fit needs at least {MIN_POINTS} points, got {xs.size}")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise DataError("logistic fit needs finite scores")
    if np.all(xs == xs[0]):
        raise DataError("logistic fit needs objective scores that are not all equal")

    start = initial_params(xs, ys)
    best = None
    for factor in SLOPE_RESTARTS:
        beta0 = start.copy()
        beta0[1] *= factor
        result = least_squares(
            _residuals,
            beta0,
            jac=_jacobian,
            args=(xs, ys),
            method="lm",
            ftol=tolerance,
            xtol=tolerance,
            gtol=tolerance,
            max_nfev=max_iterations,
        )
        sse = float(np.sum(result.fun**2))
        if best is None or sse < best[1]:
            best = (result, sse)

    result, sse = best
    beta = result.x
    converged = bool(result.status > 0)

    slope, intercept = np.polyfit(xs, ys, 1)
    affine_sse = float(np.sum((slope * xs + intercept - ys) ** 2))
    if sse > affine_sse:
        beta = np.array([0.0, start[1], start[2], slope, intercept])
        sse = affine_sse
        converged = True

    if not converged:
        logger.warning("Logistic fit stopped after %d evaluations without converging", result.nfev)
    return LogisticParams(
        b1=float(beta[0]),
        b2=float(beta[1]),
        b3=float(beta[2]),
        b4=float(beta[3]),
        b5=float(beta[4]),
        sse=sse,
        iterations=int(result.nfev),
        converged=converged,
    )
