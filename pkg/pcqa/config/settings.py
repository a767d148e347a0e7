"""Global settings instance for PCQA.

Provides a lazily loaded settings object with a flat property interface
over the structured PcqaConfig.
"""

import logging
from pathlib import Path

from pcqa.config.loader import load_config
from pcqa.config.schema import PcqaConfig

logger = logging.getLogger(__name__)


class Settings:
    """Flat accessors over a PcqaConfig."""

    def __init__(self, config: PcqaConfig | None = None):
        """Initialize settings.

        Args:
            config: Optional PcqaConfig instance. If not provided, loads from file.
        """
        self._config = config or load_config()
        pooling = self._config.pooling
        if not pooling.gamma_low <= pooling.gamma <= pooling.gamma_high:
            logger.warning(
                "Configured gamma %.3f lies outside the recommended interval [%.2f, %.2f]",
                pooling.gamma,
                pooling.gamma_low,
                pooling.gamma_high,
            )

    @property
    def config(self) -> PcqaConfig:
        """Get the full configuration object."""
        return self._config

    # Pre-processing
    @property
    def bit_depth(self) -> int:
        return self._config.preprocess.bit_depth

    @property
    def target_box(self) -> tuple[float, float, float]:
        return self._config.preprocess.target_box

    @property
    def normalize(self) -> bool:
        return self._config.preprocess.normalize

    # Point metrics
    @property
    def normal_k(self) -> int:
        return self._config.point_metrics.normal_k

    @property
    def psnr_peak(self) -> float | None:
        return self._config.point_metrics.psnr_peak

    @property
    def metric_bit_depth(self) -> int:
        return self._config.point_metrics.bit_depth

    @property
    def direction(self) -> str:
        return self._config.point_metrics.direction

    # Projection
    @property
    def splat_radius(self) -> int:
        return self._config.projection.splat_radius

    @property
    def background(self) -> tuple[int, int, int]:
        return self._config.projection.background

    @property
    def resolution(self) -> int:
        return self._config.projection.resolution

    # Image metrics
    @property
    def metrics(self) -> list[str]:
        return list(self._config.iqa.metrics)

    @property
    def masked(self) -> bool:
        return self._config.iqa.masked

    # Pooling
    @property
    def gamma(self) -> float:
        return self._config.pooling.gamma

    @property
    def pooling(self) -> str:
        return self._config.pooling.pooling

    @property
    def gamma_range(self) -> tuple[float, float]:
        return (self._config.pooling.gamma_low, self._config.pooling.gamma_high)

    # Subjective
    @property
    def alpha(self) -> float:
        return self._config.subjective.alpha

    @property
    def range_thresh(self) -> float:
        return self._config.subjective.range_thresh

    @property
    def std_thresh(self) -> float:
        return self._config.subjective.std_thresh

    # Runtime
    @property
    def workers(self) -> int:
        return self._config.runtime.workers

    @property
    def output_dir(self) -> Path:
        return self._config.runtime.output_dir

    @property
    def log_level(self) -> str:
        return self._config.runtime.log_level

    # Benchmark
    @property
    def max_iterations(self) -> int:
        return self._config.benchmark.max_iterations

    @property
    def tolerance(self) -> float:
        return self._config.benchmark.tolerance

    @property
    def decimals(self) -> int:
        return self._config.benchmark.decimals

    @property
    def human_sequences(self) -> list[str]:
        return list(self._config.benchmark.human_sequences)

    @property
    def object_sequences(self) -> list[str]:
        return list(self._config.benchmark.object_sequences)


# Global settings instance - lazily initialized
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get the global settings instance.

    The settings are loaded once and cached for subsequent calls.
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def configure(config: PcqaConfig) -> Settings:
    """Install an explicitly built configuration as the global settings."""
    global _settings
    _settings = Settings(config)
    return _settings


def reset_settings() -> None:
    """Reset the global settings instance.

    This is primarily useful for testing to reload configuration.
    """
    global _settings
    _settings = None
