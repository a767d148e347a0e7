"""Pytest configuration and fixtures for PCQA tests.

Clouds are synthetic and seeded, so every test is deterministic and needs
no dataset on disk.
"""

import csv
import math
import os
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from pcqa.config.settings import reset_settings
from pcqa.models.cloud import PointCloud
from pcqa.services.ply_io import write_cloud

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))

# Two sequences x two gQP levels x two tQP levels, rated by six subjects
RATING_SEQUENCES = ("figure", "vase")
RATING_OFFSETS = (-2.0, -1.0, 0.0, 1.0, 2.0, 3.0)


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch: pytest.MonkeyPatch):
    """Drop cached settings and PCQA_* variables around every test."""
    for name in list(os.environ):
        if name.startswith("PCQA_"):
            monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator."""
    return np.random.default_rng(20190822)


def sphere_positions(n: int, radius: float, center: tuple[float, float, float]) -> np.ndarray:
    """Evenly spread points on a sphere (Fibonacci lattice)."""
    i = np.arange(n) + 0.5
    y = 1.0 - 2.0 * i / n
    r = np.sqrt(1.0 - y * y)
    phi = GOLDEN_ANGLE * np.arange(n)
    unit = np.column_stack([r * np.cos(phi), y, r * np.sin(phi)])
    return np.asarray(center) + radius * unit


@pytest.fixture
def make_sphere() -> Callable[..., PointCloud]:
    """Factory for colored sphere clouds; the default is 41 voxels across."""

    def make(
        n: int = 1500,
        radius: float = 20.0,
        center: tuple[float, float, float] = (25.0, 25.0, 25.0),
        colored: bool = True,
    ) -> PointCloud:
        positions = sphere_positions(n, radius, center)
        colors = None
        if colored:
            lo, hi = positions.min(axis=0), positions.max(axis=0)
            colors = np.round(255.0 * (positions - lo) / (hi - lo)).astype(np.uint8)
        return PointCloud(positions=positions, colors=colors)

    return make


@pytest.fixture
def sphere(make_sphere) -> PointCloud:
    return make_sphere()


@pytest.fixture
def sphere_ply(tmp_path: Path, sphere: PointCloud) -> Path:
    """The default sphere written as binary PLY."""
    return write_cloud(tmp_path / "sphere.ply", sphere)


def rating_rows() -> list[dict[str, object]]:
    """Ratings with a clear quantization trend and small per-rating jitter."""
    rows: list[dict[str, object]] = []
    for i, offset in enumerate(RATING_OFFSETS):
        subject = f"S{i + 1}"
        for s, sequence in enumerate(RATING_SEQUENCES):
            rows.append(
                {"subject_id": subject, "sample_id": f"{sequence}_ref", "sequence": sequence,
                 "gqp": 0, "tqp": 0, "score": 95.0 + offset}
            )
            for g in (1, 2):
                for t in (1, 2):
                    j = 4 * s + 2 * (g - 1) + (t - 1)
                    jitter = ((7 * i + 3 * j) % 5) - 2
                    quality = 90.0 - 10.0 * g - 8.0 * t - 3.0 * s
                    rows.append(
                        {"subject_id": subject, "sample_id": f"{sequence}_g{g}_t{t}", "sequence": sequence,
                         "gqp": g, "tqp": t, "score": quality + offset + jitter}
                    )
    return rows


def write_rows(path: Path, rows: list[dict[str, object]]) -> Path:
    """Write dict rows as CSV with the keys of the first row as header."""
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    return path


@pytest.fixture
def ratings_csv(tmp_path: Path) -> Path:
    """Ratings CSV of 6 subjects over 8 distorted samples plus references."""
    return write_rows(tmp_path / "ratings.csv", rating_rows())


@pytest.fixture
def csv_writer() -> Callable[[Path, list[dict[str, object]]], Path]:
    """Helper writing dict rows to a CSV file."""
    return write_rows
