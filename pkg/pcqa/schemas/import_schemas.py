"""Pydantic schemas for rows read from score tables and batch manifests."""

from pathlib import Path

from pydantic import BaseModel

from pcqa.models.report import Session


class ObjectiveRecord(BaseModel):
    """One objective score of one sample, as read from a metric CSV."""

    sample_id: str
    metric: str
    value: float
    pooling: str = ""
    gamma: float | None = None
    session: Session | None = None


class ManifestEntry(BaseModel):
    """One (reference, distorted) pair of a batch run."""

    ref: Path
    dist: Path
    sample_id: str
    sequence: str = ""
    gqp: int | None = None
    tqp: int | None = None
