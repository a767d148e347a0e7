"""PCQA configuration module.

Configuration is loaded from the following locations (in order of priority):
1. Command-line flags (highest priority)
2. Environment variables (PCQA_<SECTION>_<KEY>)
3. --config FILE (TOML or key=value), else ./pcqa.toml,
   ~/.config/pcqa/pcqa.toml, /etc/pcqa/pcqa.toml
"""

from pcqa.config.schema import (
    BenchmarkConfig,
    IqaConfig,
    PcqaConfig,
    PointMetricsConfig,
    PoolingConfig,
    PreprocessConfig,
    ProjectionConfig,
    RuntimeConfig,
    SubjectiveConfig,
)
from pcqa.config.settings import Settings, configure, get_settings, reset_settings

__all__ = [
    "BenchmarkConfig",
    "IqaConfig",
    "PcqaConfig",
    "PointMetricsConfig",
    "PoolingConfig",
    "PreprocessConfig",
    "ProjectionConfig",
    "RuntimeConfig",
    "Settings",
    "SubjectiveConfig",
    "configure",
    "get_settings",
    "reset_settings",
]
