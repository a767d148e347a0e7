"""Objective score records."""

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GeometryError(BaseModel):
    """Pooled geometric error in squared voxel units."""

    model_config = ConfigDict(frozen=True)

    forward_mse: float = Field(..., ge=0)
    backward_mse: float = Field(..., ge=0)
    symmetric_mse: float = Field(..., ge=0)
    forward_haus: float = Field(..., ge=0)
    backward_haus: float = Field(..., ge=0)
    symmetric_haus: float = Field(..., ge=0)

    @model_validator(mode="after")
    def check_symmetric(self) -> "GeometryError":
        """Symmetric fields are the max of the two directions."""
        if self.symmetric_mse != max(self.forward_mse, self.backward_mse):
            raise ValueError("symmetric_mse must equal max(forward_mse, backward_mse)")
        if self.symmetric_haus != max(self.forward_haus, self.backward_haus):
            raise ValueError("symmetric_haus must equal max(forward_haus, backward_haus)")
        return self

    def mse(self, direction: str = "symmetric") -> float:
        return float(getattr(self, f"{direction}_mse"))

    def hausdorff(self, direction: str = "symmetric") -> float:
        return float(getattr(self, f"{direction}_haus"))


class ColorError(BaseModel):
    """Symmetric per-channel color MSE in squared 8-bit code values."""

    model_config = ConfigDict(frozen=True)

    mse_y: float = Field(..., ge=0, le=255.0**2)
    mse_u: float = Field(..., ge=0, le=255.0**2)
    mse_v: float = Field(..., ge=0, le=255.0**2)


class MetricScore(BaseModel):
    """A named objective quality value with its direction of merit."""

    model_config = ConfigDict(frozen=True)

    name: str
    value: float
    higher_is_better: bool = True

    @property
    def is_sentinel(self) -> bool:
        """Infinite PSNR on identical inputs; excluded from correlation runs."""
        return math.isinf(self.value)


class ViewScores(BaseModel):
    """Per-view scores of one metric plus the pooling weight gamma."""

    model_config = ConfigDict(frozen=True)

    s_front: float
    s_back: float
    s_left: float
    s_right: float
    s_top: float
    s_bottom: float
    gamma: float = Field(0.19, ge=0.0, le=1.0)

    @classmethod
    def from_mapping(cls, scores: dict[str, float], gamma: float) -> "ViewScores":
        """Build from a {view_name: score} mapping."""
        return cls(**{f"s_{name}": float(value) for name, value in scores.items()}, gamma=gamma)

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        """Scores in VIEW_NAMES order."""
        return (self.s_front, self.s_back, self.s_left, self.s_right, self.s_top, self.s_bottom)


class LogisticParams(BaseModel):
    """Parameters of the five-parameter logistic regression."""

    model_config = ConfigDict(frozen=True)

    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    sse: float = Field(0.0, ge=0)
    iterations: int = 0
    converged: bool = True

    def as_array(self) -> list[float]:
        return [self.b1, self.b2, self.b3, self.b4, self.b5]
