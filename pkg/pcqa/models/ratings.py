"""Subjective rating records: raw opinion scores, DMOS and ANOVA tables."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from pcqa.exceptions import DataError

SCORE_MIN = 0.0
SCORE_MAX = 100.0


class SampleInfo(BaseModel):
    """Identity of one distorted stimulus."""

    model_config = ConfigDict(frozen=True)

    sample_id: str
    sequence: str
    gqp: int
    tqp: int

    @property
    def is_reference(self) -> bool:
        """Reference (lossless) stimuli are flagged with gqp=0, tqp=0."""
        return self.gqp == 0 and self.tqp == 0


class RatingRecord(BaseModel):
    """One row of a ratings CSV."""

    model_config = ConfigDict(frozen=True)

    subject_id: str
    sample_id: str
    sequence: str
    gqp: int
    tqp: int
    score: float = Field(..., ge=SCORE_MIN, le=SCORE_MAX)


@dataclass(frozen=True, eq=False)
class RatingMatrix:
    """Subjects x samples opinion scores plus per-subject reference ratings.

    Attributes:
        subjects: Subject ids, one per row.
        samples: Distorted samples, one per column.
        scores: (N, M) scores, NaN where a subject did not rate a sample.
        sequences: Sequence names, one per column of ref_scores.
        ref_scores: (N, S) rating of each sequence's reference, NaN if missing.
    """

    subjects: tuple[str, ...]
    samples: tuple[SampleInfo, ...]
    scores: np.ndarray
    sequences: tuple[str, ...]
    ref_scores: np.ndarray

    def __post_init__(self) -> None:
        n, m = len(self.subjects), len(self.samples)
        if self.scores.shape != (n, m):
            raise DataError(f"scores shape {self.scores.shape} != ({n}, {m})")
        if self.ref_scores.shape != (n, len(self.sequences)):
            raise DataError("ref_scores shape does not match subjects x sequences")
        for array in (self.scores, self.ref_scores):
            finite = array[~np.isnan(array)]
            if finite.size and (finite.min() < SCORE_MIN or finite.max() > SCORE_MAX):
                raise DataError("opinion scores must lie within [0, 100]")
            array.setflags(write=False)
        unknown = {s.sequence for s in self.samples} - set(self.sequences)
        if unknown:
            raise DataError(f"samples reference unknown sequences: {sorted(unknown)}")

    @property
    def mask(self) -> np.ndarray:
        """True where a rating exists."""
        return ~np.isnan(self.scores)

    @property
    def sample_ids(self) -> list[str]:
        return [s.sample_id for s in self.samples]

    def sequence_index(self) -> np.ndarray:
        """Column of ref_scores for every sample."""
        lookup = {name: i for i, name in enumerate(self.sequences)}
        return np.array([lookup[s.sequence] for s in self.samples], dtype=int)

    @classmethod
    def from_records(cls, records: Iterable[RatingRecord]) -> RatingMatrix:
        """Assemble a matrix from CSV rows; reference rows have gqp=0, tqp=0.

        Subjects, samples and sequences are ordered by first appearance.
        """
        subjects: dict[str, int] = {}
        samples: dict[str, SampleInfo] = {}
        sequences: dict[str, int] = {}
        ratings: list[tuple[str, str, float]] = []
        refs: list[tuple[str, str, float]] = []

        for record in records:
            subjects.setdefault(record.subject_id, len(subjects))
            sequences.setdefault(record.sequence, len(sequences))
            info = SampleInfo(
                sample_id=record.sample_id,
                sequence=record.sequence,
                gqp=record.gqp,
                tqp=record.tqp,
            )
            if info.is_reference:
                refs.append((record.subject_id, record.sequence, record.score))
                continue
            known = samples.setdefault(record.sample_id, info)
            if known != info:
                raise DataError(
                    f"sample {record.sample_id} maps to two (sequence, gQP, tQP) triples"
                )
            ratings.append((record.subject_id, record.sample_id, record.score))

        sample_index = {sid: j for j, sid in enumerate(samples)}
        scores = np.full((len(subjects), len(samples)), np.nan)
        ref_scores = np.full((len(subjects), len(sequences)), np.nan)
        for subject, sample_id, score in ratings:
            scores[subjects[subject], sample_index[sample_id]] = score
        for subject, sequence, score in refs:
            ref_scores[subjects[subject], sequences[sequence]] = score

        return cls(
            subjects=tuple(subjects),
            samples=tuple(samples.values()),
            scores=scores,
            sequences=tuple(sequences),
            ref_scores=ref_scores,
        )


class DmosRow(BaseModel):
    """Processed subjective score of one sample."""

    sample_id: str
    sequence: str = ""
    gqp: int = 0
    tqp: int = 0
    dmos: float | None = Field(None, gt=0.0, lt=1.0)
    n_subjects: int = 0
    flags: list[str] = Field(default_factory=list)

    @property
    def retained(self) -> bool:
        return self.dmos is not None


class DmosTable(BaseModel):
    """DMOS for every sample plus the screening outcome."""

    rows: list[DmosRow]
    rejected_subjects: list[str] = Field(default_factory=list)

    @property
    def retained(self) -> list[DmosRow]:
        return [row for row in self.rows if row.retained]

    def by_sample(self) -> dict[str, DmosRow]:
        return {row.sample_id: row for row in self.rows}


class QpLevelRow(BaseModel):
    """Mean DMOS at one level of one quantization parameter."""

    factor: str
    level: int
    mean_dmos: float
    n: int


class SessionAgreement(BaseModel):
    """How well per-setup DMOS of one session predicts the other."""

    n_setups: int
    r2_linear: float
    r2_logistic: float


class AnovaRow(BaseModel):
    """One source-of-variation row."""

    source: str
    ss: float
    df: int
    ms: float | None = None
    f: float | None = None
    p: float | None = None
    f_crit: float | None = None


class AnovaTable(BaseModel):
    """Two-way ANOVA with interaction: A, B, A x B, error, total."""

    rows: list[AnovaRow]

    def row(self, source: str) -> AnovaRow:
        for row in self.rows:
            if row.source == source:
                return row
        raise KeyError(source)
