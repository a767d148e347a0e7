"""Six-view raster value objects."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pcqa.exceptions import DataError
from pcqa.models.cloud import BoundingBox

# Order is fixed: it is the order of rows in CSV output and of files on disk
VIEW_NAMES: tuple[str, ...] = ("front", "back", "left", "right", "top", "bottom")
LATERAL_VIEWS: tuple[str, ...] = ("front", "back", "left", "right")
VERTICAL_VIEWS: tuple[str, ...] = ("top", "bottom")


@dataclass(frozen=True, eq=False)
class View:
    """One orthographic rendering.

    Attributes:
        name: One of VIEW_NAMES.
        rgb: (H, W, 3) uint8 raster.
        mask: (H, W) bool occupancy.
        depth: (H, W) float64 distance to the viewing plane, inf where unoccupied.
    """

    name: str
    rgb: np.ndarray
    mask: np.ndarray
    depth: np.ndarray

    def __post_init__(self) -> None:
        if self.name not in VIEW_NAMES:
            raise DataError(f"unknown view name: {self.name}")
        h, w = self.mask.shape
        if self.rgb.shape != (h, w, 3) or self.depth.shape != (h, w):
            raise DataError(f"view {self.name}: raster shapes disagree")
        for array in (self.rgb, self.mask, self.depth):
            array.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return int(self.mask.shape[0]), int(self.mask.shape[1])

    @property
    def occupied(self) -> int:
        return int(self.mask.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, View):
            return NotImplemented
        return (
            self.name == other.name
            and np.array_equal(self.rgb, other.rgb)
            and np.array_equal(self.mask, other.mask)
            and np.array_equal(self.depth, other.depth)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class ViewSet:
    """Six views rendered from one shared bounding box."""

    views: dict[str, View]
    box: BoundingBox
    resolution: int = 1

    def __post_init__(self) -> None:
        if tuple(self.views) != VIEW_NAMES:
            missing = set(VIEW_NAMES) - set(self.views)
            if missing:
                raise DataError(f"view set is missing views: {sorted(missing)}")
            object.__setattr__(self, "views", {name: self.views[name] for name in VIEW_NAMES})

    def __getitem__(self, name: str) -> View:
        return self.views[name]

    def __iter__(self):
        return iter(self.views.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ViewSet):
            return NotImplemented
        return self.box == other.box and all(self[n] == other[n] for n in VIEW_NAMES)

    __hash__ = None  # type: ignore[assignment]
