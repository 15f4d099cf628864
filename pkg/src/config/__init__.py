"""Configuration package: constants from settings, run parameters from YAML."""

from .settings import (
    numerics_config,
    tolerance_config,
    logging_config,
    performance_config,
    REPORT_SCHEMA_VERSION,
)
from .config_loader import RunConfig, ConfigLoader, load_run_config

__all__ = [
    'numerics_config', 'tolerance_config', 'logging_config', 'performance_config',
    'REPORT_SCHEMA_VERSION', 'RunConfig', 'ConfigLoader', 'load_run_config',
]
