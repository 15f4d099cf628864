"""
Rotation angle, frames, scaling-function system and existence residual.

Starting from an arbitrary chart (x, y), the Gram-Schmidt frame
D1 = f_x/sqrt(E), D2 = (E f_y - F f_x)/(sqrt(E) W) is rotated by alpha onto
the principal directions and scaled by K:

    f_gamma = K ( D1 cos(alpha) + D2 sin(alpha))
    f_beta  = K (-D1 sin(alpha) + D2 cos(alpha))

alpha solves tan(2 alpha) = num/den (see forms.alpha_terms) and is known
only modulo pi/2. Branch 0 is the representative in [-pi/4, pi/4]; branch k
adds k*pi/2. K must satisfy a first-order PDE system whose compatibility
is the existence condition evaluated by existence_residual().
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from ..config.settings import numerics_config
from ..surfaces.surface_def import Jet2, SurfaceDef, jet
from ..utils.errors import HypothesisViolated, OutOfDomain, UmbilicPoint
from .forms import FundamentalData, alpha_terms, fundamental, is_umbilic

Point = Tuple[float, float]

QUARTER_TURN = 0.5 * math.pi

SPECIAL_CASES = ("F0", "isothermal", "revolution")


@dataclass(frozen=True)
class FrameAngle:
    alpha: float
    branch: int
    point: Point


@dataclass(frozen=True)
class FrameVectors:
    D1: np.ndarray
    D2: np.ndarray
    f_gamma: np.ndarray
    f_beta: np.ndarray
    K: float


@dataclass(frozen=True)
class AlphaGradient:
    alpha_x: float
    alpha_y: float
    fd_step: float
    angle: FrameAngle                                  # alpha at the centre
    truncation_error: Optional[Tuple[float, float]] = None


@dataclass(frozen=True)
class ExistenceFields:
    """Pointwise ingredients of the scaling-function system"""
    point: Point
    E: float
    F: float
    G: float
    E_y: float
    G_x: float
    alpha: float
    alpha_x: float
    alpha_y: float
    P1: float
    P2: float
    Q1: float
    Q2: float


# ─── Rotation angle ──────────────────────────────────────────────────────────

def unwrap_to(candidate: float, reference: float) -> float:
    """Shift candidate by a multiple of pi/2 to within pi/4 of reference"""
    return candidate + round((reference - candidate) / QUARTER_TURN) * QUARTER_TURN


def alpha(fd: FundamentalData, branch: int = 0,
          continuity_hint: Optional[FrameAngle] = None,
          tol: Optional[float] = None) -> FrameAngle:
    if branch not in (0, 1, 2, 3):
        raise ValueError(f"branch must be 0..3, got {branch}")
    if is_umbilic(fd, tol):
        raise UmbilicPoint(fd.point)

    num, den, s = alpha_terms(fd)
    if abs(num) <= numerics_config.ALPHA_ROUNDOFF_FLOOR * s * fd.W:
        num = 0.0

    raw = 0.5 * math.atan2(num, den)
    base = raw - round(raw / QUARTER_TURN) * QUARTER_TURN
    value = base + branch * QUARTER_TURN
    if continuity_hint is not None:
        value = unwrap_to(value, continuity_hint.alpha)
    return FrameAngle(alpha=value, branch=branch, point=fd.point)


def default_step(p: Point, factor: float) -> float:
    return factor * max(1.0, abs(p[0]), abs(p[1]))


def _require_inside(surface: SurfaceDef, p: Point) -> None:
    if not surface.contains(p):
        raise OutOfDomain((float(p[0]), float(p[1])))


def _axis_derivative(value_at: Callable[[Point], float], surface: SurfaceDef,
                     p: Point, axis: int, h: float, center: float) -> float:
    """Central difference, falling back to a one-sided 2nd-order stencil at edges"""
    def shifted(k: int) -> Point:
        q = [p[0], p[1]]
        q[axis] += k * h
        return (q[0], q[1])

    plus, minus = shifted(1), shifted(-1)
    if surface.contains(plus) and surface.contains(minus):
        return (value_at(plus) - value_at(minus)) / (2.0 * h)
    plus2, minus2 = shifted(2), shifted(-2)
    if surface.contains(plus) and surface.contains(plus2):
        return (-3.0 * center + 4.0 * value_at(plus) - value_at(plus2)) / (2.0 * h)
    if surface.contains(minus) and surface.contains(minus2):
        return (3.0 * center - 4.0 * value_at(minus) + value_at(minus2)) / (2.0 * h)
    raise OutOfDomain(plus if not surface.contains(plus) else minus)


def alpha_gradient(surface: SurfaceDef, p: Point, branch: int = 0,
                   h: Optional[float] = None,
                   hint: Optional[FrameAngle] = None,
                   with_error: bool = False,
                   center_fd: Optional[FundamentalData] = None,
                   umbilic_tol: Optional[float] = None) -> AlphaGradient:
    """
    Finite-difference gradient of alpha. Stencil angles are unwrapped onto
    the centre angle before differencing so branch jumps never leak in.
    With with_error the step-2h result gives the truncation estimate
    |D_h - D_2h| / 3 per component.
    """
    p = (float(p[0]), float(p[1]))
    _require_inside(surface, p)
    if h is None:
        h = default_step(p, numerics_config.ALPHA_GRADIENT_STEP_FACTOR)
    fd0 = center_fd if center_fd is not None else fundamental(jet(surface, p))
    a0 = alpha(fd0, branch, hint, umbilic_tol)

    def alpha_at(q: Point) -> float:
        return alpha(fundamental(jet(surface, q)), branch, a0, umbilic_tol).alpha

    grad = [_axis_derivative(alpha_at, surface, p, axis, h, a0.alpha) for axis in (0, 1)]
    error = None
    if with_error:
        coarse = [_axis_derivative(alpha_at, surface, p, axis, 2.0 * h, a0.alpha)
                  for axis in (0, 1)]
        error = (abs(grad[0] - coarse[0]) / 3.0, abs(grad[1] - coarse[1]) / 3.0)
    return AlphaGradient(alpha_x=grad[0], alpha_y=grad[1], fd_step=h,
                         angle=a0, truncation_error=error)


# ─── Frames and right-hand sides ─────────────────────────────────────────────

def frames(j: Jet2, fd: FundamentalData, a: FrameAngle, K: float) -> FrameVectors:
    sqrtE = math.sqrt(fd.E)
    D1 = j.f_x / sqrtE
    D2 = (fd.E * j.f_y - fd.F * j.f_x) / (sqrtE * fd.W)
    c, s = math.cos(a.alpha), math.sin(a.alpha)
    return FrameVectors(
        D1=D1,
        D2=D2,
        f_gamma=K * (c * D1 + s * D2),
        f_beta=K * (-s * D1 + c * D2),
        K=K,
    )


def metric_terms(fd: FundamentalData) -> Tuple[float, float]:
    """P1, P2: the metric part of the scaling-function system"""
    E, F = fd.E, fd.F
    r = F / E
    g_perp = math.sqrt(fd.G - F * r)          # sqrt(G - F^2/E) = W/sqrt(E)
    sqrtE = math.sqrt(E)
    P1 = (r * r * fd.E_x - 2.0 * r * fd.F_x + fd.G_x) / (2.0 * g_perp * g_perp * sqrtE)
    P2 = (-fd.E_y - r * fd.E_x + 2.0 * fd.F_x) / (2.0 * E * g_perp)
    return P1, P2


def rotation_terms(fd: FundamentalData, g: AlphaGradient) -> Tuple[float, float]:
    """Q1, Q2: the alpha-gradient part of the scaling-function system"""
    r = fd.F / fd.E
    g_perp = math.sqrt(fd.G - fd.F * r)
    Q1 = (g.alpha_y - r * g.alpha_x) / g_perp
    Q2 = g.alpha_x / math.sqrt(fd.E)
    return Q1, Q2


def k_rhs(fd: FundamentalData, a: FrameAngle, g: AlphaGradient, K: float) -> Tuple[float, float]:
    """(K_gamma, K_beta)"""
    P1, P2 = metric_terms(fd)
    Q1, Q2 = rotation_terms(fd, g)
    c, s = math.cos(a.alpha), math.sin(a.alpha)
    A, B = P1 + Q1, P2 + Q2
    K2 = K * K
    return K2 * (A * c - B * s), K2 * (-A * s - B * c)


def chart_rhs(fd: FundamentalData, a: FrameAngle, K: float) -> Tuple[float, float, float, float]:
    """(x_gamma, x_beta, y_gamma, y_beta), the Jacobian of the new chart"""
    sqrtE = math.sqrt(fd.E)
    g_perp = math.sqrt(fd.G - fd.F * fd.F / fd.E)
    c, s = math.cos(a.alpha), math.sin(a.alpha)
    shear = fd.F / (sqrtE * fd.W)
    x_gamma = K * (c / sqrtE - shear * s)
    x_beta = K * (-s / sqrtE - shear * c)
    y_gamma = K * s / g_perp
    y_beta = K * c / g_perp
    return x_gamma, x_beta, y_gamma, y_beta


# ─── Existence condition ─────────────────────────────────────────────────────

def existence_fields(surface: SurfaceDef, p: Point, branch: int = 0,
                     alpha_step: Optional[float] = None,
                     hint: Optional[FrameAngle] = None,
                     umbilic_tol: Optional[float] = None) -> ExistenceFields:
    p = (float(p[0]), float(p[1]))
    fd = fundamental(jet(surface, p))
    g = alpha_gradient(surface, p, branch, alpha_step, hint, center_fd=fd,
                       umbilic_tol=umbilic_tol)
    P1, P2 = metric_terms(fd)
    Q1, Q2 = rotation_terms(fd, g)
    return ExistenceFields(
        point=p, E=fd.E, F=fd.F, G=fd.G, E_y=fd.E_y, G_x=fd.G_x,
        alpha=g.angle.alpha, alpha_x=g.alpha_x, alpha_y=g.alpha_y,
        P1=P1, P2=P2, Q1=Q1, Q2=Q2,
    )


def _cross_stencil(surface: SurfaceDef, p: Point, h: float) -> Dict[str, Point]:
    x, y = p
    points = {
        "xp": (x + h, y), "xm": (x - h, y),
        "yp": (x, y + h), "ym": (x, y - h),
    }
    for q in points.values():
        _require_inside(surface, q)
    return points


def existence_residual(surface: SurfaceDef, p: Point, branch: int = 0,
                       h: Optional[float] = None,
                       alpha_step: Optional[float] = None,
                       umbilic_tol: Optional[float] = None) -> float:
    """
    Signed left side of the compatibility condition for K. Pointwise
    P1, P2, Q1, Q2 come from exact fundamental data and FD alpha gradients;
    their outer x/y derivatives are central differences with step h.
    """
    p = (float(p[0]), float(p[1]))
    _require_inside(surface, p)
    if h is None:
        h = default_step(p, numerics_config.EXISTENCE_STEP_FACTOR)
    stencil = _cross_stencil(surface, p, h)

    c = existence_fields(surface, p, branch, alpha_step, umbilic_tol=umbilic_tol)
    hint = FrameAngle(c.alpha, branch, p)
    f = {k: existence_fields(surface, q, branch, alpha_step, hint, umbilic_tol)
         for k, q in stencil.items()}

    def dx(name: str) -> float:
        return (getattr(f["xp"], name) - getattr(f["xm"], name)) / (2.0 * h)

    def dy(name: str) -> float:
        return (getattr(f["yp"], name) - getattr(f["ym"], name)) / (2.0 * h)

    r = c.F / c.E
    sqrtE = math.sqrt(c.E)
    g_perp = math.sqrt(c.G - c.F * r)

    metric = (dy("P1") - r * dx("P1")) / g_perp + dx("P2") / sqrtE + c.P1 * c.Q2 - c.P2 * c.Q1
    rotation = (dx("Q2") / sqrtE + c.Q1 * c.Q2 + dy("Q1") / g_perp
                - r * (dx("Q1") + c.Q2 * c.alpha_x) / g_perp)
    return metric - rotation


def _hypothesis_scale(fd: FundamentalData) -> Tuple[float, float]:
    return fd.E + fd.G, abs(fd.l) + abs(fd.m) + abs(fd.n) + numerics_config.EPS_ABS


def case_holds(fd: FundamentalData, case: str, tol: Optional[float] = None) -> bool:
    tol = numerics_config.HYPOTHESIS_TOL if tol is None else tol
    metric_scale, form_scale = _hypothesis_scale(fd)
    f_zero = abs(fd.F) <= tol * metric_scale
    if case == "F0":
        return f_zero
    if case == "isothermal":
        return f_zero and abs(fd.E - fd.G) <= tol * metric_scale
    if case == "revolution":
        return f_zero and abs(fd.m) <= tol * form_scale
    raise ValueError(f"unknown special case '{case}'")


def select_special_case(fd: FundamentalData, tol: Optional[float] = None) -> Optional[str]:
    """Most specific reduction whose hypothesis holds at the point, or None"""
    for case in ("revolution", "isothermal", "F0"):
        if case_holds(fd, case, tol):
            return case
    return None


def existence_residual_special(surface: SurfaceDef, p: Point, case: str,
                               branch: int = 0, h: Optional[float] = None,
                               alpha_step: Optional[float] = None,
                               tol: Optional[float] = None,
                               umbilic_tol: Optional[float] = None) -> float:
    """
    Reduced existence condition:
      F0          orthogonal chart
      isothermal  E = G, F = 0 (sign matches existence_residual)
      revolution  F = 0, m = 0, alpha = 0: mixed derivative of ln(G/E)
    """
    if case not in SPECIAL_CASES:
        raise ValueError(f"unknown special case '{case}'")
    p = (float(p[0]), float(p[1]))
    _require_inside(surface, p)
    if h is None:
        h = default_step(p, numerics_config.EXISTENCE_STEP_FACTOR)
    fd = fundamental(jet(surface, p))
    if not case_holds(fd, case, tol):
        detail = f"E={fd.E:.6g}, F={fd.F:.3e}, G={fd.G:.6g}, m={fd.m:.3e}"
        raise HypothesisViolated(case, detail)

    if case == "revolution":
        if is_umbilic(fd, umbilic_tol):
            raise UmbilicPoint(p)
        x, y = p
        corners = [(x + h, y + h), (x + h, y - h), (x - h, y + h), (x - h, y - h)]
        logs = []
        for q in corners:
            _require_inside(surface, q)
            fq = fundamental(jet(surface, q))
            logs.append(math.log(fq.G / fq.E))
        return (logs[0] - logs[1] - logs[2] + logs[3]) / (4.0 * h * h)

    stencil = _cross_stencil(surface, p, h)
    c = existence_fields(surface, p, branch, alpha_step, umbilic_tol=umbilic_tol)
    hint = FrameAngle(c.alpha, branch, p)
    f = {k: existence_fields(surface, q, branch, alpha_step, hint, umbilic_tol)
         for k, q in stencil.items()}

    def d(axis: str, fn: Callable[[ExistenceFields], float]) -> float:
        plus, minus = (f["xp"], f["xm"]) if axis == "x" else (f["yp"], f["ym"])
        return (fn(plus) - fn(minus)) / (2.0 * h)

    if case == "F0":
        sqrtE, sqrtG = math.sqrt(c.E), math.sqrt(c.G)
        term_p1 = d("y", lambda e: e.G_x / (2.0 * e.G * math.sqrt(e.E))) / sqrtG
        term_p2 = d("x", lambda e: e.E_y / (2.0 * math.sqrt(e.G) * e.E)) / sqrtE
        mixed = (c.G_x * c.alpha_x + c.E_y * c.alpha_y) / (2.0 * c.G * c.E)
        rotation = (d("x", lambda e: e.alpha_x / math.sqrt(e.E)) / sqrtE
                    + c.alpha_y * c.alpha_x / math.sqrt(c.G * c.E)
                    + d("y", lambda e: e.alpha_y / math.sqrt(e.G)) / sqrtG)
        return term_p1 - term_p2 + mixed - rotation

    # isothermal
    return -(d("x", lambda e: e.alpha_x / e.E)
             + c.alpha_y * c.alpha_x / c.E
             + d("y", lambda e: e.alpha_y / e.E))
