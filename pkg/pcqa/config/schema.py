"""Pydantic models for PCQA configuration.

These models define the structure of pcqa.toml and key=value config files.
"""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, field_validator


class PreprocessConfig(BaseModel):
    """MPEG-style pre-processing configuration."""

    bit_depth: int = Field(10, ge=1, le=21)
    target_box: tuple[float, float, float] = (600.0, 1000.0, 400.0)
    normalize: bool = False


class PointMetricsConfig(BaseModel):
    """Point-based metric configuration."""

    normal_k: int = Field(16, ge=3, le=64)
    bit_depth: int = Field(10, ge=1, le=21)
    # Peak value override; None means 2^bit_depth - 1
    psnr_peak: float | None = Field(None, gt=0)
    direction: Literal["forward", "backward", "symmetric"] = "symmetric"


class ProjectionConfig(BaseModel):
    """Six-view rasterizer configuration."""

    splat_radius: int = Field(1, ge=0)
    background: tuple[int, int, int] = (128, 128, 128)
    resolution: int = Field(1, ge=1)

    @field_validator("background")
    @classmethod
    def check_background(cls, v: tuple[int, int, int]) -> tuple[int, int, int]:
        """Background must be an 8-bit RGB triple."""
        if any(c < 0 or c > 255 for c in v):
            raise ValueError("background channels must be within [0, 255]")
        return v


class PoolingConfig(BaseModel):
    """View pooling configuration."""

    gamma: float = Field(0.19, ge=0.0, le=1.0)
    pooling: Literal["mean", "weighted"] = "weighted"
    gamma_low: float = 0.13
    gamma_high: float = 0.31


class IqaConfig(BaseModel):
    """Image quality metric selection."""

    metrics: list[str] = Field(default_factory=lambda: ["psnr", "uqi", "ssim", "ms_ssim", "gmsd"])
    masked: bool = False


class SubjectiveConfig(BaseModel):
    """Subjective score processing configuration."""

    alpha: float = Field(0.025, gt=0.0, lt=1.0)
    range_thresh: float = 7.0
    std_thresh: float = 1.2


class BenchmarkConfig(BaseModel):
    """Logistic regression and report configuration."""

    max_iterations: int = Field(500, ge=1)
    tolerance: float = Field(1e-10, gt=0.0)
    decimals: int = Field(4, ge=0)
    # Session membership by sequence name, used when the objective CSV has no session column
    human_sequences: list[str] = Field(default_factory=list)
    object_sequences: list[str] = Field(default_factory=list)


class RuntimeConfig(BaseModel):
    """Execution configuration."""

    workers: int = Field(1, ge=1)
    output_dir: Path = Field(default_factory=lambda: Path("results"))
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"


class PcqaConfig(BaseModel):
    """Main PCQA configuration."""

    preprocess: PreprocessConfig = Field(default_factory=PreprocessConfig)
    point_metrics: PointMetricsConfig = Field(default_factory=PointMetricsConfig)
    projection: ProjectionConfig = Field(default_factory=ProjectionConfig)
    pooling: PoolingConfig = Field(default_factory=PoolingConfig)
    iqa: IqaConfig = Field(default_factory=IqaConfig)
    subjective: SubjectiveConfig = Field(default_factory=SubjectiveConfig)
    benchmark: BenchmarkConfig = Field(default_factory=BenchmarkConfig)
    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)
