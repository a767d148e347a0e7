"""Row conversion functions for score tables."""

from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar

from pydantic import ValidationError

from pcqa.exceptions import DataError
from pcqa.models.ratings import DmosRow, RatingRecord
from pcqa.models.report import BenchmarkRow
from pcqa.models.scores import LogisticParams, ViewScores
from pcqa.schemas.import_schemas import ManifestEntry, ObjectiveRecord

from .constants import FLAG_SEPARATOR

T = TypeVar("T")


def _coerce_float(value: str) -> float | None:
    """Coerce text to float; empty text is None, 'inf' is accepted."""
    if not value:
        return None
    return float(value)


def _coerce_int(value: str) -> int | None:
    """Coerce text to int; '3.0' is accepted, '3.5' is not."""
    if not value:
        return None
    number = float(value)
    if not number.is_integer():
        raise ValueError(f"expected an integer, got {value!r}")
    return int(number)


def convert_rows(rows: list[dict[str, Any]], convert: Callable[[dict[str, Any]], T], source: str) -> list[T]:
    """Apply a converter to every row, reporting the 1-based file line of a bad row.

    Raises:
        DataError: A value cannot be converted or fails validation.
    """
    result = []
    for index, row in enumerate(rows):
        try:
            result.append(convert(row))
        except (ValueError, ValidationError) as exc:
            # Header is line 1
            raise DataError(f"{source}, line {index + 2}: {exc}") from exc
    return result


def row_to_rating(row: dict[str, Any]) -> RatingRecord:
    return RatingRecord(
        subject_id=row["subject_id"],
        sample_id=row["sample_id"],
        sequence=row["sequence"],
        gqp=_coerce_int(row["gqp"]),
        tqp=_coerce_int(row["tqp"]),
        score=_coerce_float(row["score"]),
    )


def row_to_dmos(row: dict[str, Any]) -> DmosRow:
    flags = [f for f in row.get("flags", "").split(FLAG_SEPARATOR) if f]
    return DmosRow(
        sample_id=row["sample_id"],
        sequence=row.get("sequence", ""),
        gqp=_coerce_int(row.get("gqp", "")) or 0,
        tqp=_coerce_int(row.get("tqp", "")) or 0,
        dmos=_coerce_float(row["dmos"]),
        n_subjects=_coerce_int(row.get("n_subjects", "")) or 0,
        flags=flags,
    )


def row_to_objective(row: dict[str, Any]) -> ObjectiveRecord:
    value = _coerce_float(row["value"])
    if value is None:
        raise ValueError("missing objective value")
    return ObjectiveRecord(
        sample_id=row["sample_id"],
        metric=row["metric"],
        value=value,
        pooling=row.get("pooling", ""),
        gamma=_coerce_float(row.get("gamma", "")),
        session=row.get("session") or None,
    )


def row_to_view_scores(row: dict[str, Any]) -> tuple[str, ViewScores]:
    gamma = _coerce_float(row.get("gamma", ""))
    scores = {
        name: _coerce_float(row[f"s_{name}"]) for name in ("front", "back", "left", "right", "top", "bottom")
    }
    if any(v is None for v in scores.values()):
        raise ValueError("every view score must be present")
    return row["sample_id"], ViewScores.from_mapping(scores, 0.19 if gamma is None else gamma)


def manifest_converter(base: Path) -> Callable[[dict[str, Any]], ManifestEntry]:
    """Converter resolving relative cloud paths against the manifest's directory."""

    def convert(row: dict[str, Any]) -> ManifestEntry:
        ref, dist = Path(row["ref"]), Path(row["dist"])
        ref = ref if ref.is_absolute() else base / ref
        dist = dist if dist.is_absolute() else base / dist
        return ManifestEntry(
            ref=ref,
            dist=dist,
            sample_id=row.get("sample_id") or dist.stem,
            sequence=row.get("sequence", ""),
            gqp=_coerce_int(row.get("gqp", "")),
            tqp=_coerce_int(row.get("tqp", "")),
        )

    return convert


def row_to_report(row: dict[str, Any]) -> BenchmarkRow:
    """Rebuild a benchmark row from a report CSV; fit diagnostics are not stored there."""
    params = LogisticParams(**{b: _coerce_float(row[b]) for b in ("b1", "b2", "b3", "b4", "b5")})
    return BenchmarkRow(
        session=row["session"],
        metric=row["metric"],
        pooling=row.get("pooling", ""),
        gamma=_coerce_float(row.get("gamma", "")),
        plcc=_coerce_float(row["plcc"]),
        srocc=_coerce_float(row["srocc"]),
        krocc=_coerce_float(row["krocc"]),
        rmse=_coerce_float(row["rmse"]),
        n=_coerce_int(row["n"]),
        params=params,
    )
