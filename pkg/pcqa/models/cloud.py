"""Point cloud and bounding box value objects."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from pcqa.exceptions import DataError

NORMAL_TOLERANCE = 1e-6


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Positions plus optional per-point colors and normals.

    Arrays are copied on construction and marked read-only, so a cloud can be
    shared between threads.
    """

    positions: np.ndarray
    colors: np.ndarray | None = None
    normals: np.ndarray | None = None
    bit_depth: int = 10
    # Points whose neighbourhood was rank-deficient when normals were estimated
    low_confidence: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        positions = np.array(self.positions, dtype=np.float64, copy=True).reshape(-1, 3)
        n = positions.shape[0]
        object.__setattr__(self, "positions", _frozen(positions))

        if self.colors is not None:
            raw = np.asarray(self.colors)
            if raw.size and (raw.min() < 0 or raw.max() > 255):
                raise DataError("colors must be 8-bit values in [0, 255]")
            colors = np.array(raw, dtype=np.uint8, copy=True).reshape(-1, 3)
            if colors.shape[0] != n:
                raise DataError(f"colors has {colors.shape[0]} rows, positions has {n}")
            object.__setattr__(self, "colors", _frozen(colors))

        if self.normals is not None:
            normals = np.array(self.normals, dtype=np.float64, copy=True).reshape(-1, 3)
            if normals.shape[0] != n:
                raise DataError(f"normals has {normals.shape[0]} rows, positions has {n}")
            norms = np.linalg.norm(normals, axis=1)
            if n and np.any(np.abs(norms - 1.0) > NORMAL_TOLERANCE):
                bad = int(np.argmax(np.abs(norms - 1.0)))
                raise DataError(f"normal {bad} has length {norms[bad]:.9f}, expected unit length")
            object.__setattr__(self, "normals", _frozen(normals))

        if self.low_confidence is not None:
            mask = np.array(self.low_confidence, dtype=bool, copy=True).reshape(-1)
            if mask.shape[0] != n:
                raise DataError("low_confidence mask length differs from point count")
            object.__setattr__(self, "low_confidence", _frozen(mask))

        if self.bit_depth < 1:
            raise DataError("bit_depth must be positive")

    def __len__(self) -> int:
        return int(self.positions.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return (
            self.bit_depth == other.bit_depth
            and np.array_equal(self.positions, other.positions)
            and _optional_equal(self.colors, other.colors)
            and _optional_equal(self.normals, other.normals)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def has_colors(self) -> bool:
        return self.colors is not None

    @property
    def has_normals(self) -> bool:
        return self.normals is not None

    def with_normals(self, normals: np.ndarray, low_confidence: np.ndarray | None = None) -> PointCloud:
        """Return a copy of this cloud carrying the given normals."""
        return PointCloud(
            positions=self.positions,
            colors=self.colors,
            normals=normals,
            bit_depth=self.bit_depth,
            low_confidence=low_confidence,
        )

    def with_positions(self, positions: np.ndarray) -> PointCloud:
        """Return a copy with new positions; colors and normals are kept."""
        return PointCloud(
            positions=positions,
            colors=self.colors,
            normals=self.normals,
            bit_depth=self.bit_depth,
        )


def _optional_equal(a: np.ndarray | None, b: np.ndarray | None) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return np.array_equal(a, b)


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in voxel units."""

    min_corner: tuple[float, float, float]
    max_corner: tuple[float, float, float]

    def __post_init__(self) -> None:
        lo = tuple(float(v) for v in self.min_corner)
        hi = tuple(float(v) for v in self.max_corner)
        if len(lo) != 3 or len(hi) != 3:
            raise DataError("bounding box corners must be 3-vectors")
        if any(h < l for l, h in zip(lo, hi)):
            raise DataError(f"max_corner {hi} is below min_corner {lo}")
        object.__setattr__(self, "min_corner", lo)
        object.__setattr__(self, "max_corner", hi)

    @classmethod
    def from_size(cls, size: tuple[float, float, float]) -> BoundingBox:
        """Box anchored at the origin with the given extent."""
        return cls((0.0, 0.0, 0.0), tuple(float(s) for s in size))  # type: ignore[arg-type]

    @property
    def extent(self) -> np.ndarray:
        return np.subtract(self.max_corner, self.min_corner)

    def contains(self, points: np.ndarray, tolerance: float = 1e-9) -> bool:
        """True when every point lies inside the box (inclusive)."""
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if pts.size == 0:
            return True
        lo = np.asarray(self.min_corner) - tolerance
        hi = np.asarray(self.max_corner) + tolerance
        return bool(np.all(pts >= lo) and np.all(pts <= hi))
