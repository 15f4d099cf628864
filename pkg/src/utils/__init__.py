"""Shared utilities: the exception hierarchy"""

from .errors import (
    ConfigError, GeometryError, IntegrationError, IsoMeshError, Mismatch,
    SchemaError, SurfaceError, VerificationError,
)

__all__ = [
    'IsoMeshError', 'SurfaceError', 'GeometryError', 'IntegrationError',
    'VerificationError', 'ConfigError', 'SchemaError', 'Mismatch',
]
