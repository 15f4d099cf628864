#!/usr/bin/env python3
"""
Mesh Diagnostics

Independent checks that a generated mesh is isothermic. Tangent vectors
and second derivatives come from finite differences of the stored
positions over the (beta, gamma) grid; only the unit normal is taken from
the surface jets. Nothing here calls the generator's right-hand sides.
"""

import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..config.settings import numerics_config, tolerance_config
from ..geometry.forms import fundamental, is_umbilic, shape_operator
from ..geometry.isothermic import FrameAngle, frames
from ..integration.integrator import IsoMesh
from ..surfaces.surface_def import SurfaceDef, jet
from ..utils.errors import MeshTooSmall, NotConformalEnough, UmbilicPoint

EPS = numerics_config.EPS_ABS


@dataclass
class DiagnosticsReport:
    conformality_max: float
    orthogonality_max: float
    curvature_line_max: float
    integral_drift_max: float
    path_independence: Optional[float] = None
    hopf_imag_max: Optional[float] = None
    interior_nodes: int = 0
    shape: Tuple[int, int] = (0, 0)
    h_beta: float = 0.0
    h_gamma: float = 0.0

    RESIDUAL_FIELDS = ('conformality_max', 'orthogonality_max', 'curvature_line_max',
                       'integral_drift_max', 'path_independence', 'hopf_imag_max')

    def residuals(self) -> Dict[str, Optional[float]]:
        return {name: getattr(self, name) for name in self.RESIDUAL_FIELDS}

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['shape'] = list(self.shape)
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "DiagnosticsReport":
        values = dict(data)
        values['shape'] = tuple(values.get('shape', (0, 0)))
        return cls(**values)


# ─── Grid finite differences ─────────────────────────────────────────────────

def _grid_derivative(F: np.ndarray, ok: np.ndarray, h: float, axis: int,
                     order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    First (order=1) or second (order=2) derivative along one grid axis.
    Fourth-order central stencils where five consecutive nodes are defined,
    second-order central where only three are.
    """
    Fm = np.moveaxis(F, axis, 0)
    okm = np.moveaxis(ok, axis, 0)
    out = np.full(Fm.shape, np.nan)
    defined = np.zeros(okm.shape, dtype=bool)
    n = Fm.shape[0]
    for k in range(1, n - 1):
        c2 = okm[k - 1] & okm[k] & okm[k + 1]
        c4 = np.zeros_like(c2)
        if 2 <= k <= n - 3:
            c4 = c2 & okm[k - 2] & okm[k + 2]
        if order == 1:
            d2 = (Fm[k + 1] - Fm[k - 1]) / (2.0 * h)
            d4 = ((-Fm[k + 2] + 8.0 * Fm[k + 1] - 8.0 * Fm[k - 1] + Fm[k - 2]) / (12.0 * h)
                  if 2 <= k <= n - 3 else d2)
        else:
            d2 = (Fm[k + 1] - 2.0 * Fm[k] + Fm[k - 1]) / (h * h)
            d4 = ((-Fm[k + 2] + 16.0 * Fm[k + 1] - 30.0 * Fm[k] + 16.0 * Fm[k - 1] - Fm[k - 2])
                  / (12.0 * h * h) if 2 <= k <= n - 3 else d2)
        out[k][c2] = d2[c2]
        out[k][c4] = d4[c4]
        defined[k] = c2
    return np.moveaxis(out, 0, axis), np.moveaxis(defined, 0, axis)


MIN_INTERIOR = 3


def _has_block(mask: np.ndarray, size: int) -> bool:
    """True when some size x size window of the mask is entirely set"""
    if mask.shape[0] < size or mask.shape[1] < size:
        return False
    windows = np.lib.stride_tricks.sliding_window_view(mask, (size, size))
    return bool(windows.all(axis=(-2, -1)).any())


@dataclass
class _MeshDerivatives:
    f_beta: np.ndarray
    f_gamma: np.ndarray
    f_bb: np.ndarray
    f_gg: np.ndarray
    f_bg: np.ndarray
    interior: np.ndarray
    normals: np.ndarray


def _derivatives(mesh: IsoMesh, surface: SurfaceDef) -> _MeshDerivatives:
    F = mesh.f_pullback
    ok = mesh.valid
    f_b, ok_b = _grid_derivative(F, ok, mesh.h_beta, 0, 1)
    f_g, ok_g = _grid_derivative(F, ok, mesh.h_gamma, 1, 1)
    f_bb, ok_bb = _grid_derivative(F, ok, mesh.h_beta, 0, 2)
    f_gg, ok_gg = _grid_derivative(F, ok, mesh.h_gamma, 1, 2)
    f_bg, ok_bg = _grid_derivative(f_b, ok_b, mesh.h_gamma, 1, 1)
    interior = ok & ok_b & ok_g & ok_bb & ok_gg & ok_bg
    if not _has_block(interior, MIN_INTERIOR):
        raise MeshTooSmall((int(ok.any(axis=1).sum()), int(ok.any(axis=0).sum())))

    normals = np.full(F.shape, np.nan)
    for i, k in zip(*np.nonzero(interior)):
        normals[i, k] = fundamental(jet(surface, (mesh.x[i, k], mesh.y[i, k]))).N
    return _MeshDerivatives(f_b, f_g, f_bb, f_gg, f_bg, interior, normals)


def _second_form(d: _MeshDerivatives) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """l', m', n' at interior nodes with u = gamma, v = beta"""
    sel = d.interior
    N = d.normals[sel]
    l = np.einsum('ij,ij->i', d.f_gg[sel], N)
    m = np.einsum('ij,ij->i', d.f_bg[sel], N)
    n = np.einsum('ij,ij->i', d.f_bb[sel], N)
    return l, m, n


def _conformality(d: _MeshDerivatives, K: np.ndarray) -> float:
    sel = d.interior
    nb = np.linalg.norm(d.f_beta[sel], axis=1)
    ng = np.linalg.norm(d.f_gamma[sel], axis=1)
    k = K[sel]
    spread = np.maximum.reduce([np.abs(nb - ng), np.abs(ng - k), np.abs(nb - k)])
    return float(np.max(spread / k))


# ─── Public checks ───────────────────────────────────────────────────────────

def mesh_diagnostics(mesh: IsoMesh, surface: SurfaceDef,
                     path_independence: Optional[float] = None) -> DiagnosticsReport:
    d = _derivatives(mesh, surface)
    sel = d.interior
    K = mesh.K[sel]

    dot = np.einsum('ij,ij->i', d.f_beta[sel], d.f_gamma[sel])
    l, m, n = _second_form(d)
    curvature_line = np.abs(m) / (np.abs(l) + np.abs(n) + EPS)

    valid = mesh.valid
    drift = np.linalg.norm(mesh.f_pullback[valid] - mesh.f_int[valid], axis=1)

    return DiagnosticsReport(
        conformality_max=_conformality(d, mesh.K),
        orthogonality_max=float(np.max(np.abs(dot) / (K * K))),
        curvature_line_max=float(np.max(curvature_line)),
        integral_drift_max=float(np.max(drift)) if drift.size else 0.0,
        path_independence=path_independence,
        interior_nodes=int(sel.sum()),
        shape=mesh.shape,
        h_beta=mesh.h_beta,
        h_gamma=mesh.h_gamma,
    )


def hopf_realness(mesh: IsoMesh, surface: SurfaceDef,
                  conformal_limit: Optional[float] = None) -> float:
    """
    Max of |Im Q| / (|Q| + eps) with Q = (l' - n')/4 - i m'/2, which is only
    meaningful in a conformal chart.
    """
    limit = tolerance_config.HOPF_CONFORMAL_LIMIT if conformal_limit is None else conformal_limit
    d = _derivatives(mesh, surface)
    conformality = _conformality(d, mesh.K)
    if conformality > limit:
        raise NotConformalEnough(conformality, limit)
    l, m, n = _second_form(d)
    Q = (l - n) / 4.0 - 0.5j * m
    return float(np.max(np.abs(Q.imag) / (np.abs(Q) + EPS)))


def diagnose(mesh: IsoMesh, surface: SurfaceDef,
             path_independence: Optional[float] = None) -> DiagnosticsReport:
    """mesh_diagnostics plus the Hopf check when the chart is conformal enough"""
    report = mesh_diagnostics(mesh, surface, path_independence)
    if report.conformality_max <= tolerance_config.HOPF_CONFORMAL_LIMIT:
        report.hopf_imag_max = hopf_realness(mesh, surface)
    return report


def principal_direction_oracle(surface: SurfaceDef, p: Tuple[float, float],
                               a: FrameAngle) -> float:
    """Angle between f_gamma and the nearest eigenvector of the shape operator"""
    j = jet(surface, p)
    fd = fundamental(j)
    if is_umbilic(fd):
        raise UmbilicPoint((float(p[0]), float(p[1])))

    _, vectors = np.linalg.eig(shape_operator(fd))
    u = frames(j, fd, a, 1.0).f_gamma
    best = math.pi
    for v in np.real(vectors).T:
        t = v[0] * j.f_x + v[1] * j.f_y
        t = t / np.linalg.norm(t)
        angle = math.atan2(float(np.linalg.norm(np.cross(u, t))), abs(float(u @ t)))
        best = min(best, angle)
    return best
