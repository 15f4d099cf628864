"""
Isothermic mesh integrator.

Marches the coupled system (x, y, K) together with the integrated position
f_int over a (beta, gamma) grid with classical fixed-step RK4:

  1. the gamma = 0 row is marched along beta from the seed,
  2. every column is then marched along gamma from its row node.

Columns are independent once the row exists and may run on a thread pool;
results are merged by index so the mesh does not depend on worker count.
Failures (umbilic stage, domain exit) truncate the line at the last good node.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from ..geometry.forms import fundamental, is_umbilic
from ..geometry.isothermic import FrameAngle, alpha, alpha_gradient, chart_rhs, frames, k_rhs
from ..monitoring.system_logger import system_logger
from ..surfaces.surface_def import SurfaceDef, evaluate, jet
from ..utils.errors import (
    GeometryError, IntegrationError, LeftDomain, OutOfDomain, SeedOutOfDomain, SeedUmbilic,
    SurfaceError,
    UmbilicEncountered, UmbilicPoint,
)

Point = Tuple[float, float]

BETA = "beta"
GAMMA = "gamma"


@dataclass(frozen=True)
class MarchState:
    x: float
    y: float
    K: float
    f_int: np.ndarray
    alpha_hint: Optional[FrameAngle] = None
    branch: int = 0

    def vector(self) -> np.ndarray:
        return np.concatenate(([self.x, self.y, self.K], self.f_int))

    def with_vector(self, u: np.ndarray, hint: Optional[FrameAngle]) -> "MarchState":
        return replace(self, x=float(u[0]), y=float(u[1]), K=float(u[2]),
                       f_int=np.array(u[3:6]), alpha_hint=hint)


@dataclass
class MeshStats:
    valid_count: int
    total: int
    coverage: float
    x_range: Tuple[float, float]
    y_range: Tuple[float, float]
    K_range: Tuple[float, float]

    def to_dict(self) -> dict:
        return {
            'valid_count': self.valid_count,
            'total': self.total,
            'coverage': self.coverage,
            'x_range': list(self.x_range),
            'y_range': list(self.y_range),
            'K_range': list(self.K_range),
        }


@dataclass
class IsoMesh:
    """Node arrays indexed [i_beta, i_gamma]"""
    x: np.ndarray
    y: np.ndarray
    K: np.ndarray
    f_pullback: np.ndarray
    f_int: np.ndarray
    valid: np.ndarray
    h_beta: float
    h_gamma: float
    origin: Point
    K0: float
    branch: int
    surface: Optional[SurfaceDef] = None
    failures: List[str] = field(default_factory=list)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.valid.shape

    def stats(self) -> MeshStats:
        count = int(self.valid.sum())
        total = int(self.valid.size)
        if count == 0:
            nan = (math.nan, math.nan)
            return MeshStats(0, total, 0.0, nan, nan, nan)
        xs, ys, ks = self.x[self.valid], self.y[self.valid], self.K[self.valid]
        return MeshStats(
            valid_count=count,
            total=total,
            coverage=count / total,
            x_range=(float(xs.min()), float(xs.max())),
            y_range=(float(ys.min()), float(ys.max())),
            K_range=(float(ks.min()), float(ks.max())),
        )


# ─── Single steps ────────────────────────────────────────────────────────────

def _derivative(surface: SurfaceDef, u: np.ndarray, direction: str, branch: int,
                hint: Optional[FrameAngle], tol: Optional[float],
                alpha_step: Optional[float]) -> Tuple[np.ndarray, FrameAngle]:
    p = (float(u[0]), float(u[1]))
    K = float(u[2])
    if not (math.isfinite(p[0]) and math.isfinite(p[1])) or not surface.contains(p):
        raise LeftDomain(p)
    if not (math.isfinite(K) and K > 0.0):
        raise IntegrationError(f"scaling function K={K:.3e} is no longer positive at {p}")

    try:
        j = jet(surface, p)
        fd = fundamental(j)
        if is_umbilic(fd, tol):
            raise UmbilicEncountered(p)
        g = alpha_gradient(surface, p, branch, alpha_step, hint,
                           center_fd=fd, umbilic_tol=tol)
    except UmbilicPoint:
        raise UmbilicEncountered(p)
    except OutOfDomain:
        raise LeftDomain(p)
    except (SurfaceError, GeometryError) as e:
        raise IntegrationError(f"surface cannot be evaluated at {p}: {e}")
    a = g.angle

    x_g, x_b, y_g, y_b = chart_rhs(fd, a, K)
    K_g, K_b = k_rhs(fd, a, g, K)
    fv = frames(j, fd, a, K)
    if direction == GAMMA:
        du = np.array([x_g, y_g, K_g, *fv.f_gamma])
    else:
        du = np.array([x_b, y_b, K_b, *fv.f_beta])
    return du, a


def rk4_step(surface: SurfaceDef, s: MarchState, direction: str, h: float,
             tol: Optional[float] = None,
             alpha_step: Optional[float] = None) -> MarchState:
    """One classical RK4 step; the angle is threaded through the stages"""
    if direction not in (BETA, GAMMA):
        raise ValueError(f"direction must be '{BETA}' or '{GAMMA}'")
    if h == 0.0:
        return s

    u = s.vector()
    k1, a1 = _derivative(surface, u, direction, s.branch, s.alpha_hint, tol, alpha_step)
    k2, a2 = _derivative(surface, u + 0.5 * h * k1, direction, s.branch, a1, tol, alpha_step)
    k3, a3 = _derivative(surface, u + 0.5 * h * k2, direction, s.branch, a2, tol, alpha_step)
    k4, a4 = _derivative(surface, u + h * k3, direction, s.branch, a3, tol, alpha_step)
    u_new = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    p_new = (float(u_new[0]), float(u_new[1]))
    if not surface.contains(p_new):
        raise LeftDomain(p_new)
    return s.with_vector(u_new, a4)


def march_line(surface: SurfaceDef, start: MarchState, direction: str, h: float,
               steps: int, tol: Optional[float] = None,
               alpha_step: Optional[float] = None
               ) -> Tuple[List[MarchState], Optional[IntegrationError]]:
    """States start..start+steps along one direction, cut at the first failure"""
    states = [start]
    state = start
    for _ in range(steps):
        try:
            state = rk4_step(surface, state, direction, h, tol, alpha_step)
        except IntegrationError as e:
            return states, e
        states.append(state)
    return states, None


# ─── Mesh ────────────────────────────────────────────────────────────────────

def seed_state(surface: SurfaceDef, origin: Point, K0: float, branch: int,
               tol: Optional[float] = None) -> MarchState:
    origin = (float(origin[0]), float(origin[1]))
    if not surface.contains(origin):
        raise SeedOutOfDomain(origin)
    if not (math.isfinite(K0) and K0 > 0.0):
        raise ValueError(f"K0 must be positive, got {K0}")
    fd = fundamental(jet(surface, origin))
    if is_umbilic(fd, tol):
        raise SeedUmbilic(origin)
    return MarchState(
        x=origin[0], y=origin[1], K=float(K0),
        f_int=np.array(evaluate(surface, origin), dtype=float),
        alpha_hint=alpha(fd, branch, tol=tol),
        branch=branch,
    )


def build_mesh(surface: SurfaceDef, origin: Point, K0: float, branch: int,
               h_beta: float, h_gamma: float, n_beta: int, n_gamma: int,
               workers: int = 1, tol: Optional[float] = None,
               alpha_step: Optional[float] = None) -> IsoMesh:
    if h_beta == 0.0 or h_gamma == 0.0:
        raise ValueError("step sizes must be nonzero")
    if n_beta < 2 or n_gamma < 2:
        raise ValueError("grid needs at least 2 nodes per direction")

    started = time.time()
    seed = seed_state(surface, origin, K0, branch, tol)

    row, row_error = march_line(surface, seed, BETA, h_beta, n_beta - 1, tol, alpha_step)
    failures = []
    if row_error is not None:
        system_logger.log_march_stopped("row", len(row), str(row_error))
        failures.append(f"row stopped at i_beta={len(row)}: {row_error}")

    def column(state: MarchState):
        return march_line(surface, state, GAMMA, h_gamma, n_gamma - 1, tol, alpha_step)

    if workers > 1 and len(row) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(column, row))
    else:
        columns = [column(state) for state in row]

    shape = (n_beta, n_gamma)
    mesh = IsoMesh(
        x=np.full(shape, np.nan), y=np.full(shape, np.nan), K=np.full(shape, np.nan),
        f_pullback=np.full(shape + (3,), np.nan), f_int=np.full(shape + (3,), np.nan),
        valid=np.zeros(shape, dtype=bool),
        h_beta=float(h_beta), h_gamma=float(h_gamma),
        origin=(seed.x, seed.y), K0=float(K0), branch=branch,
        surface=surface, failures=failures,
    )
    for i, (states, error) in enumerate(columns):
        if error is not None:
            system_logger.log_march_stopped(f"column {i}", len(states), str(error))
            failures.append(f"column {i} stopped at i_gamma={len(states)}: {error}")
        for k, st in enumerate(states):
            mesh.x[i, k] = st.x
            mesh.y[i, k] = st.y
            mesh.K[i, k] = st.K
            mesh.f_int[i, k] = st.f_int
            mesh.f_pullback[i, k] = evaluate(surface, (st.x, st.y))
            mesh.valid[i, k] = True
        if len(states) <= 1:
            system_logger.warning("Column has no valid node past the row", column=i)

    system_logger.log_mesh_built(shape, int(mesh.valid.sum()), time.time() - started)
    return mesh


def path_independence_check(surface: SurfaceDef, origin: Point, K0: float, branch: int,
                            h_beta: float, h_gamma: float, steps: int,
                            tol: Optional[float] = None,
                            alpha_step: Optional[float] = None) -> float:
    """Endpoint discrepancy between beta-then-gamma and gamma-then-beta"""
    if steps == 0:
        return 0.0
    seed = seed_state(surface, origin, K0, branch, tol)

    def two_legs(first: str, h_first: float, second: str, h_second: float) -> MarchState:
        leg1, err = march_line(surface, seed, first, h_first, steps, tol, alpha_step)
        if err is not None:
            raise err
        leg2, err = march_line(surface, leg1[-1], second, h_second, steps, tol, alpha_step)
        if err is not None:
            raise err
        return leg2[-1]

    a = two_legs(BETA, h_beta, GAMMA, h_gamma)
    b = two_legs(GAMMA, h_gamma, BETA, h_beta)
    return max(
        abs(a.x - b.x),
        abs(a.y - b.y),
        abs(a.K - b.K) / a.K,
        float(np.linalg.norm(a.f_int - b.f_int)),
    )
