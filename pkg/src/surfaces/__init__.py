"""Surface definitions, expression language and exact jets"""

from .catalog import BUILTINS, BuiltinDescriptor, BuiltinSurface, DelaunayProfile
from .expression import parse_expression
from .hyperdual import HyperDual
from .surface_def import (
    Domain, Jet2, SurfaceDef, builtin_catalog, evaluate, expression_twin,
    jet, load_surface, parse_surface,
)

__all__ = [
    'BUILTINS', 'BuiltinDescriptor', 'BuiltinSurface', 'DelaunayProfile',
    'parse_expression', 'HyperDual',
    'Domain', 'Jet2', 'SurfaceDef', 'builtin_catalog', 'evaluate',
    'expression_twin', 'jet', 'load_surface', 'parse_surface',
]
