#!/usr/bin/env python3
"""
Configuration Loader for mesh runs
Loads the YAML defaults, applies CLI overrides and validates the result
"""

import math
import yaml
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ..utils.errors import ConfigError
from .settings import numerics_config, performance_config, tolerance_config

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent / "config" / "run_config.yaml"


@dataclass
class RunConfig:
    """Run configuration dataclass"""
    command: str
    surface: str

    # Seed
    origin: Optional[Tuple[float, float]]
    k0: float
    branch: int

    # March
    h_beta: float
    h_gamma: float
    n_beta: int
    n_gamma: int

    # Existence sampling
    n_x: int
    n_y: int
    region: Optional[Tuple[float, float, float, float]]

    # Tolerances
    tol_umbilic: float
    tol_residual: float
    tol_diagnostics: float

    # Numerics
    fd_step: Optional[float]

    # Output
    mesh_path: str
    report_path: str

    # Performance
    workers: int

    def to_dict(self) -> Dict[str, Any]:
        """Serializable view embedded in JSON reports"""
        return {
            'surface': self.surface,
            'origin': list(self.origin) if self.origin is not None else None,
            'k0': self.k0,
            'branch': self.branch,
            'steps': [self.h_beta, self.h_gamma],
            'size': [self.n_beta, self.n_gamma],
            'check_size': [self.n_x, self.n_y],
            'region': list(self.region) if self.region is not None else None,
            'tol_umbilic': self.tol_umbilic,
            'tol_residual': self.tol_residual,
            'tol_diagnostics': self.tol_diagnostics,
            'fd_step': self.fd_step,
            'workers': self.workers,
        }


class ConfigLoader:
    """Loads and validates run configuration files"""

    def __init__(self, config_path: Optional[Path] = None):
        self.config_path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
        if not self.config_path.exists():
            raise ConfigError(f"Config file not found: {self.config_path}")

    def load_yaml(self) -> Dict[str, Any]:
        """Load the YAML file"""
        with open(self.config_path, 'r', encoding='utf-8') as f:
            raw = yaml.safe_load(f) or {}
        if not isinstance(raw, dict):
            raise ConfigError(f"Config file is not a mapping: {self.config_path}")
        return raw

    def load_run_config(self, command: str = "reparam") -> RunConfig:
        """Build a RunConfig from the YAML defaults"""
        raw = self.load_yaml()
        try:
            origin = raw['seed']['origin']
            region = raw['check']['region']
            tolerances = raw.get('tolerances') or {}
            return RunConfig(
                command=command,
                surface=str(raw['surface']['spec']),

                origin=tuple(float(v) for v in origin) if origin is not None else None,
                k0=float(raw['seed']['k0']),
                branch=int(raw['seed']['branch']),

                h_beta=float(raw['march']['h_beta']),
                h_gamma=float(raw['march']['h_gamma']),
                n_beta=int(raw['march']['n_beta']),
                n_gamma=int(raw['march']['n_gamma']),

                n_x=int(raw['check']['n_x']),
                n_y=int(raw['check']['n_y']),
                region=tuple(float(v) for v in region) if region is not None else None,

                tol_umbilic=float(tolerances.get('umbilic', numerics_config.UMBILIC_TOL)),
                tol_residual=float(tolerances.get('residual', tolerance_config.EXISTENCE_THRESHOLD)),
                tol_diagnostics=float(tolerances.get('diagnostics',
                                                     tolerance_config.DIAGNOSTIC_THRESHOLD)),

                fd_step=(float(raw['numerics']['fd_step'])
                         if raw['numerics'].get('fd_step') is not None else None),

                mesh_path=str(raw['output']['mesh']),
                report_path=str(raw['output']['report']),

                workers=int(raw.get('performance', {}).get('workers', performance_config.WORKERS)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Malformed config {self.config_path}: {e}")


def apply_overrides(cfg: RunConfig, overrides: Dict[str, Any]) -> RunConfig:
    """Return a copy of cfg with every non-None override applied"""
    changes = {k: v for k, v in overrides.items() if v is not None}
    unknown = set(changes) - set(RunConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"Unknown config fields: {sorted(unknown)}")
    return replace(cfg, **changes)


def validate_config(cfg: RunConfig) -> bool:
    """
    Validate run configuration

    Returns:
        True if valid, raises ConfigError if invalid
    """
    numeric = [cfg.k0, cfg.h_beta, cfg.h_gamma, cfg.tol_umbilic,
               cfg.tol_residual, cfg.tol_diagnostics]
    if cfg.origin is not None:
        numeric.extend(cfg.origin)
    if cfg.region is not None:
        numeric.extend(cfg.region)
    if cfg.fd_step is not None:
        numeric.append(cfg.fd_step)
    if not all(math.isfinite(v) for v in numeric):
        raise ConfigError("All numeric settings must be finite")

    if cfg.k0 <= 0:
        raise ConfigError("k0 must be positive")
    if cfg.branch not in (0, 1, 2, 3):
        raise ConfigError("branch must be one of 0, 1, 2, 3")
    if cfg.h_beta == 0 or cfg.h_gamma == 0:
        raise ConfigError("steps must be nonzero")
    if cfg.n_beta < 2 or cfg.n_gamma < 2:
        raise ConfigError("mesh size must be at least 2 in both directions")
    if cfg.n_x < 1 or cfg.n_y < 1:
        raise ConfigError("check grid needs at least one sample per axis")
    if cfg.region is not None and (cfg.region[1] <= cfg.region[0] or cfg.region[3] <= cfg.region[2]):
        raise ConfigError("region must have positive side lengths")
    if min(cfg.tol_umbilic, cfg.tol_residual, cfg.tol_diagnostics) <= 0:
        raise ConfigError("tolerances must be positive")
    if cfg.fd_step is not None and cfg.fd_step <= 0:
        raise ConfigError("fd-step must be positive")
    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")

    return True


def load_run_config(config_path: Optional[Path] = None, command: str = "reparam",
                    overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Convenience function: load YAML defaults, apply overrides, validate

    Args:
        config_path: Path to YAML file (None = config/run_config.yaml)
        command: CLI command the config is for
        overrides: field -> value mapping from CLI flags

    Returns:
        Validated RunConfig
    """
    loader = ConfigLoader(config_path)
    cfg = loader.load_run_config(command)
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    validate_config(cfg)
    return cfg


