#!/usr/bin/env python3
"""
Report Generator

Writes the artifacts of a run: OBJ mesh, JSON report, stored mesh arrays
(.npz, read back by `verify`) and the per-point CSV table of `check`.
"""

import json
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..config.settings import REPORT_SCHEMA_VERSION
from ..integration.integrator import IsoMesh
from ..monitoring.system_logger import system_logger
from ..surfaces.surface_def import SurfaceDef
from ..utils.errors import SchemaError

REQUIRED_KEYS = ('schema_version', 'command', 'surface', 'config', 'residuals', 'verdict')


def _finite_or_none(value: Any) -> Any:
    """JSON has no NaN/Inf; store them as null"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite_or_none(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_none(v) for v in value]
    if isinstance(value, np.generic):
        return _finite_or_none(value.item())
    return value


def surface_summary(surface: SurfaceDef, spec: str) -> Dict[str, Any]:
    return {
        'spec': spec,
        'source': surface.source,
        'name': surface.name,
        'kind': surface.kind,
        'params': dict(surface.params),
        'domain': list(surface.domain.as_tuple()),
    }


def build_report(command: str, surface: Dict[str, Any], config: Dict[str, Any],
                 residuals: Dict[str, Any], verdict: str,
                 umbilic_count: int = 0,
                 mesh_stats: Optional[Dict[str, Any]] = None,
                 timing: Optional[Dict[str, float]] = None,
                 **extra: Any) -> Dict[str, Any]:
    report = {
        'schema_version': REPORT_SCHEMA_VERSION,
        'command': command,
        'generated': datetime.now(timezone.utc).strftime('%Y-%m-%d %H:%M:%S UTC'),
        'surface': surface,
        'config': config,
        'residuals': residuals,
        'umbilic_count': umbilic_count,
        'verdict': verdict,
        'mesh_stats': mesh_stats,
        'timing': timing or {},
    }
    report.update(extra)
    return report


class ReportGenerator:
    """Write and read run artifacts"""

    def save_obj(self, mesh: IsoMesh, path: Path) -> Path:
        """
        Vertices are the pullback positions of valid nodes in row-major
        [i_beta, i_gamma] order, numbered from 1; one quad per fully valid cell.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        nb, ng = mesh.shape
        index = np.zeros((nb, ng), dtype=int)
        lines = [f"# isothermic mesh {nb}x{ng}"]
        counter = 0
        for i in range(nb):
            for k in range(ng):
                if mesh.valid[i, k]:
                    counter += 1
                    index[i, k] = counter
                    x, y, z = mesh.f_pullback[i, k]
                    lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
        for i in range(nb - 1):
            for k in range(ng - 1):
                if mesh.valid[i:i + 2, k:k + 2].all():
                    lines.append(f"f {index[i, k]} {index[i, k + 1]} "
                                 f"{index[i + 1, k + 1]} {index[i + 1, k]}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        system_logger.log_export("obj", path)
        return path

    def save_mesh_arrays(self, mesh: IsoMesh, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(
            path,
            x=mesh.x, y=mesh.y, K=mesh.K,
            f_pullback=mesh.f_pullback, f_int=mesh.f_int, valid=mesh.valid,
            steps=np.array([mesh.h_beta, mesh.h_gamma]),
            origin=np.array(mesh.origin), K0=np.array(mesh.K0), branch=np.array(mesh.branch),
        )
        system_logger.log_export("npz", path)
        return path

    def load_mesh_arrays(self, path: Path, surface: Optional[SurfaceDef] = None) -> IsoMesh:
        path = Path(path)
        try:
            with np.load(path) as data:
                steps = data['steps']
                return IsoMesh(
                    x=data['x'], y=data['y'], K=data['K'],
                    f_pullback=data['f_pullback'], f_int=data['f_int'],
                    valid=data['valid'].astype(bool),
                    h_beta=float(steps[0]), h_gamma=float(steps[1]),
                    origin=tuple(float(v) for v in data['origin']),
                    K0=float(data['K0']), branch=int(data['branch']),
                    surface=surface,
                )
        except KeyError as e:
            raise SchemaError(f"mesh arrays {path} lack field {e}")

    def save_report(self, report: Dict[str, Any], path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(_finite_or_none(report), f, indent=2)
        system_logger.log_export("report", path)
        return path

    def load_report(self, path: Path) -> Dict[str, Any]:
        path = Path(path)
        with open(path, 'r', encoding='utf-8') as f:
            try:
                report = json.load(f)
            except json.JSONDecodeError as e:
                raise SchemaError(f"report {path} is not valid JSON: {e}")
        validate_report(report)
        return report

    def save_check_csv(self, rows: List[Dict[str, Any]], path: Path) -> Path:
        """Per-sample residual table"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        columns = ['x', 'y', 'case', 'residual', 'status']
        pd.DataFrame(rows, columns=columns).to_csv(path, index=False)
        system_logger.log_export("csv", path)
        return path


def validate_report(report: Any) -> None:
    if not isinstance(report, dict):
        raise SchemaError("report must be a JSON object")
    missing = [k for k in REQUIRED_KEYS if k not in report]
    if missing:
        raise SchemaError(f"report lacks required keys: {missing}")
    if report['schema_version'] != REPORT_SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {report['schema_version']!r}")
    if not isinstance(report['surface'], dict) or 'spec' not in report['surface']:
        raise SchemaError("report.surface.spec is required")
    if not isinstance(report['residuals'], dict):
        raise SchemaError("report.residuals must be an object")
