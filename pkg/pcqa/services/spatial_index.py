"""Exact nearest-neighbour search over point positions.

Built on a balanced KD-tree (median split, leaf size 16). Every query is
exact, and among equidistant points the smallest point id wins, so results
depend only on the input order.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from pcqa.exceptions import DataError, DegenerateInputError

logger = logging.getLogger(__name__)

DEFAULT_LEAF_SIZE = 16
MAX_K = 64
# Extra candidates fetched beyond k on the first pass
TIE_MARGIN = 4


@dataclass(frozen=True, eq=False)
class NNIndex:
    """Immutable KD-tree over N points; safe for concurrent queries."""

    points: np.ndarray
    tree: cKDTree
    leaf_size: int = DEFAULT_LEAF_SIZE

    def __len__(self) -> int:
        return int(self.points.shape[0])


def build_index(points: np.ndarray, leaf_size: int = DEFAULT_LEAF_SIZE) -> NNIndex:
    """Build an index over an (N, 3) array of positions.

    Raises:
        DegenerateInputError: No points.
        DataError: Non-finite coordinates.
    """
    pts = np.array(points, dtype=np.float64, copy=True).reshape(-1, 3)
    if pts.shape[0] == 0:
        raise DegenerateInputError("cannot index an empty point set")
    if not np.all(np.isfinite(pts)):
        raise DataError("point coordinates must be finite")
    pts.setflags(write=False)
    tree = cKDTree(pts, leafsize=leaf_size, balanced_tree=True, compact_nodes=True)
    logger.debug("Built KD-tree over %d points (leaf size %d)", pts.shape[0], leaf_size)
    return NNIndex(points=pts, tree=tree, leaf_size=leaf_size)


def _squared(points: np.ndarray, ids: np.ndarray, queries: np.ndarray) -> np.ndarray:
    diff = points[ids] - queries
    return np.einsum("...i,...i->...", diff, diff)


def _ranked(cand: np.ndarray, d2: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """First k candidates per row ordered by (squared distance, id)."""
    order = np.lexsort((cand, d2), axis=-1)[:, :k]
    return np.take_along_axis(cand, order, axis=1), np.take_along_axis(d2, order, axis=1)


def _query_exact(index: NNIndex, q: np.ndarray, k: int, workers: int) -> tuple[np.ndarray, np.ndarray]:
    """k nearest ids per query with distance ties resolved by smallest id.

    The tree orders equidistant points arbitrarily, so every row whose
    furthest fetched candidate still ties the k-th distance is queried
    again with twice as many candidates, all such rows in one batch.
    """
    n = len(index)
    m = q.shape[0]
    ids = np.empty((m, k), dtype=np.intp)
    d2 = np.empty((m, k), dtype=np.float64)
    pending = np.arange(m)
    fetch = min(n, k + TIE_MARGIN)

    while pending.size:
        _, cand = index.tree.query(q[pending], k=fetch, workers=workers)
        cand = np.asarray(cand, dtype=np.intp).reshape(pending.size, fetch)
        cand_d2 = _squared(index.points, cand, q[pending][:, None, :])
        row_ids, row_d2 = _ranked(cand, cand_d2, k)
        ids[pending], d2[pending] = row_ids, row_d2
        if fetch == n:
            break
        # Recomputed distances may differ from the tree's in the last ulp
        kth = row_d2[:, -1]
        open_rows = cand_d2.max(axis=1) <= kth * (1.0 + 1e-12) + 1e-300
        pending = pending[open_rows]
        if pending.size:
            logger.debug("Widening %d tied queries to %d candidates", pending.size, min(n, 2 * fetch))
        fetch = min(n, 2 * fetch)

    return ids, d2


def nearest_batch(index: NNIndex, queries: np.ndarray, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Nearest neighbour of every query row.

    Returns:
        (ids, squared_distances) arrays of length M. Squared distances are
        recomputed from coordinates, not taken from the tree.
    """
    q = np.asarray(queries, dtype=np.float64).reshape(-1, 3)
    if q.shape[0] == 0:
        return np.empty(0, dtype=np.intp), np.empty(0, dtype=np.float64)
    ids, d2 = _query_exact(index, q, 1, workers)
    return ids[:, 0], d2[:, 0]


def nearest(index: NNIndex, query: np.ndarray) -> tuple[int, float]:
    """Nearest indexed point to a single 3-vector."""
    ids, d2 = nearest_batch(index, np.asarray(query, dtype=np.float64).reshape(1, 3))
    return int(ids[0]), float(d2[0])


def k_nearest_batch(index: NNIndex, queries: np.ndarray, k: int, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """k nearest neighbours of every query, ordered by (distance, id).

    Returns:
        (ids, squared_distances), each of shape (M, k).

    Raises:
        DataError: k outside [1, min(64, N)].
    """
    n = len(index)
    if not 1 <= k <= MAX_K:
        raise DataError(f"k must lie in [1, {MAX_K}], got {k}")
    if k > n:
        raise DataError(f"k={k} exceeds the {n} indexed points")
    q = np.asarray(queries, dtype=np.float64).reshape(-1, 3)
    if q.shape[0] == 0:
        return np.empty((0, k), dtype=np.intp), np.empty((0, k))

    return _query_exact(index, q, k, workers)


def k_nearest(index: NNIndex, query: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """k nearest neighbours of a single 3-vector."""
    ids, d2 = k_nearest_batch(index, np.asarray(query, dtype=np.float64).reshape(1, 3), k)
    return ids[0], d2[0]
