"""RK4 marching of the isothermic chart"""

from .integrator import (
    BETA, GAMMA, IsoMesh, MarchState, MeshStats,
    build_mesh, march_line, path_independence_check, rk4_step, seed_state,
)

__all__ = [
    'BETA', 'GAMMA', 'IsoMesh', 'MarchState', 'MeshStats',
    'build_mesh', 'march_line', 'path_independence_check', 'rk4_step', 'seed_state',
]
