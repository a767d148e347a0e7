"""Benchmark report records."""

from typing import Literal

from pydantic import BaseModel, Field

from pcqa.models.scores import LogisticParams

Session = Literal["all", "human", "object"]
SESSION_ORDER: dict[str, int] = {"all": 0, "human": 1, "object": 2}


class BenchmarkRow(BaseModel):
    """Agreement of one metric with DMOS for one session."""

    session: Session = "all"
    metric: str
    pooling: str = ""
    gamma: float | None = None
    plcc: float
    srocc: float
    krocc: float
    rmse: float
    n: int = Field(..., ge=0)
    params: LogisticParams
    higher_is_better: bool = True

    def sort_key(self) -> tuple[int, str, str, float]:
        return (SESSION_ORDER[self.session], self.metric, self.pooling, -1.0 if self.gamma is None else self.gamma)


class BenchmarkReport(BaseModel):
    """Rows sorted by (session, metric, pooling)."""

    rows: list[BenchmarkRow]

    def sorted_rows(self) -> list[BenchmarkRow]:
        return sorted(self.rows, key=BenchmarkRow.sort_key)


class GainRow(BaseModel):
    """Weighted-minus-mean differences for one metric and session."""

    session: Session = "all"
    metric: str
    plcc: float
    srocc: float
    krocc: float
    rmse: float


class GammaSweepRow(BaseModel):
    """Agreement of weighted pooling with DMOS at one gamma."""

    gamma: float = Field(..., ge=0.0, le=1.0)
    plcc: float
    srocc: float
    n: int = Field(..., ge=0)
    best: bool = False
    in_recommended: bool = False
