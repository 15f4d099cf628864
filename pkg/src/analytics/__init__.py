"""Mesh verification and run artifacts"""

from .diagnostics import (
    DiagnosticsReport, diagnose, hopf_realness, mesh_diagnostics,
    principal_direction_oracle,
)
from .reports import ReportGenerator, build_report, surface_summary, validate_report

__all__ = [
    'DiagnosticsReport', 'diagnose', 'hopf_realness', 'mesh_diagnostics',
    'principal_direction_oracle',
    'ReportGenerator', 'build_report', 'surface_summary', 'validate_report',
]
