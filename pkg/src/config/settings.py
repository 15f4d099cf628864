"""
Configuration settings for the isothermic meshing toolkit.
Numerical constants and tolerances are centralized here; logging and
performance knobs can be overridden through environment variables (.env).
"""

import os
from pathlib import Path

# Try to load dotenv if available, otherwise use environment variables directly
try:
    from dotenv import load_dotenv
    # Load environment variables from .env in project root
    env_path = Path(__file__).parent.parent.parent / ".env"
    load_dotenv(dotenv_path=env_path)
except ImportError:
    pass


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


class NumericsConfig:
    """Numerical guards and finite-difference steps"""
    # Immersion check: ||f_x x f_y|| <= IMMERSION_FACTOR * L^2
    IMMERSION_FACTOR = 1e-10

    # Absolute floor inside scale guards (flat plane has s = 0)
    EPS_ABS = 1e-14

    # Relative umbilic tolerance on the tan(2 alpha) numerator/denominator
    UMBILIC_TOL = 1e-8

    # Numerators below this relative size are rounding noise
    ALPHA_ROUNDOFF_FLOOR = 1e-13

    # Default FD steps are FACTOR * max(1, |x|, |y|)
    ALPHA_GRADIENT_STEP_FACTOR = 1e-5
    EXISTENCE_STEP_FACTOR = 1e-4

    # Special-case hypotheses (F = 0, E = G, m = 0) are tested relative to scale
    HYPOTHESIS_TOL = 1e-9

    # Unduloid profile ODE
    PROFILE_RTOL = 1e-12
    PROFILE_ATOL = 1e-12


class ToleranceConfig:
    """Pass/fail thresholds used by the CLI"""
    EXISTENCE_THRESHOLD = 1e-4
    DIAGNOSTIC_THRESHOLD = 1e-3
    HOPF_CONFORMAL_LIMIT = 1e-3
    VERIFY_MATCH_TOL = 1e-12


class LoggingConfig:
    """Log destinations and formats"""
    LOGS_DIRECTORY = os.getenv("ISO_LOGS_DIR", "logs")
    LOG_TO_FILE = _env_bool("ISO_LOG_TO_FILE", "false")
    LOG_RETENTION_DAYS = 30

    LOG_LEVEL = os.getenv("ISO_LOG_LEVEL", "INFO").upper()
    CONSOLE_LOG_LEVEL = os.getenv("ISO_CONSOLE_LOG_LEVEL", "WARNING").upper()
    CONSOLE_LOGGING_ENABLED = _env_bool("ISO_CONSOLE_LOGGING", "true")

    LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(message)s"
    LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S UTC"
    CONSOLE_LOG_FORMAT = "%(levelname)-8s | %(message)s"


class PerformanceConfig:
    """Worker pool sizing"""
    WORKERS = int(os.getenv("ISO_WORKERS", "1"))


REPORT_SCHEMA_VERSION = "1.0"

# Global configuration instances
numerics_config = NumericsConfig()
tolerance_config = ToleranceConfig()
logging_config = LoggingConfig()
performance_config = PerformanceConfig()


def validate_settings():
    """Validate critical settings and raise errors for invalid configurations"""
    levels = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
    if logging_config.LOG_LEVEL not in levels:
        raise ValueError(f"ISO_LOG_LEVEL must be one of {levels}")
    if logging_config.CONSOLE_LOG_LEVEL not in levels:
        raise ValueError(f"ISO_CONSOLE_LOG_LEVEL must be one of {levels}")

    if performance_config.WORKERS < 1:
        raise ValueError("ISO_WORKERS must be at least 1")

    if not 0 < numerics_config.UMBILIC_TOL < 1:
        raise ValueError("UMBILIC_TOL must be between 0 and 1")

    for name in ("EXISTENCE_THRESHOLD", "DIAGNOSTIC_THRESHOLD", "HOPF_CONFORMAL_LIMIT"):
        if getattr(tolerance_config, name) <= 0:
            raise ValueError(f"{name} must be positive")


# Run validation on import
validate_settings()
