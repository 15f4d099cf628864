"""
First and second fundamental forms, Gauss map and curvature.

The unit normal is N = f_x × f_y / |f_x × f_y|. Second-form coefficients
l, m, n are taken against this N, so the signs of l, m, n, H and the
principal curvatures follow the chart orientation.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..config.settings import numerics_config
from ..surfaces.surface_def import Jet2
from ..utils.errors import DegenerateMetric


@dataclass(frozen=True)
class FundamentalData:
    E: float
    F: float
    G: float
    l: float
    m: float
    n: float
    N: np.ndarray
    E_x: float
    E_y: float
    F_x: float
    G_x: float
    W: float                   # sqrt(EG - F^2)
    f_x: np.ndarray
    f_y: np.ndarray
    point: Tuple[float, float]

    @property
    def det(self) -> float:
        return self.E * self.G - self.F * self.F

    def first_form(self) -> np.ndarray:
        return np.array([[self.E, self.F], [self.F, self.G]])

    def second_form(self) -> np.ndarray:
        return np.array([[self.l, self.m], [self.m, self.n]])


@dataclass(frozen=True)
class CurvatureData:
    H: float
    K_gauss: float
    kappa1: float              # kappa1 >= kappa2
    kappa2: float
    e1: np.ndarray
    e2: np.ndarray


def fundamental(j: Jet2) -> FundamentalData:
    """Closed-form inner products of the jet; no differencing"""
    f_x, f_y = j.f_x, j.f_y
    E = float(f_x @ f_x)
    F = float(f_x @ f_y)
    G = float(f_y @ f_y)
    det = E * G - F * F
    eps = numerics_config.IMMERSION_FACTOR
    if not det > eps * eps * E * G:
        raise DegenerateMetric(det)

    cross = np.cross(f_x, f_y)
    N = cross / np.linalg.norm(cross)

    return FundamentalData(
        E=E, F=F, G=G,
        l=float(j.f_xx @ N),
        m=float(j.f_xy @ N),
        n=float(j.f_yy @ N),
        N=N,
        E_x=2.0 * float(j.f_xx @ f_x),
        E_y=2.0 * float(j.f_xy @ f_x),
        F_x=float(j.f_xx @ f_y) + float(f_x @ j.f_xy),
        G_x=2.0 * float(j.f_xy @ f_y),
        W=math.sqrt(det),
        f_x=f_x,
        f_y=f_y,
        point=j.point,
    )


def alpha_terms(fd: FundamentalData) -> Tuple[float, float, float]:
    """
    Numerator, denominator and scale guard of the rotation-angle equation:
        num = -2(-F l + E m) W
        den = (2F^2 - EG) l - 2 E F m + E^2 n
        s   = (E + G)(|l| + |m| + |n|) + eps_abs
    """
    E, F, G, l, m, n = fd.E, fd.F, fd.G, fd.l, fd.m, fd.n
    num = -2.0 * (-F * l + E * m) * fd.W
    den = (2.0 * F * F - E * G) * l - 2.0 * E * F * m + E * E * n
    s = (E + G) * (abs(l) + abs(m) + abs(n)) + numerics_config.EPS_ABS
    return num, den, s


def is_umbilic(fd: FundamentalData, tol: Optional[float] = None) -> bool:
    tol = numerics_config.UMBILIC_TOL if tol is None else tol
    num, den, s = alpha_terms(fd)
    return abs(num) <= tol * s and abs(den) <= tol * s


def shape_operator(fd: FundamentalData) -> np.ndarray:
    """Matrix of S = -dN in the {f_x, f_y} basis, I^-1 II"""
    return np.linalg.solve(fd.first_form(), fd.second_form())


def _principal_vector(fd: FundamentalData, kappa: float) -> Optional[np.ndarray]:
    # null vector of II - kappa I, taken from the better-conditioned row
    a = fd.l - kappa * fd.E
    b = fd.m - kappa * fd.F
    c = fd.n - kappa * fd.G
    r1 = np.array([-b, a])
    r2 = np.array([-c, b])
    coeffs = r1 if np.linalg.norm(r1) >= np.linalg.norm(r2) else r2
    v = coeffs[0] * fd.f_x + coeffs[1] * fd.f_y
    norm = np.linalg.norm(v)
    if norm <= numerics_config.EPS_ABS:
        return None
    return v / norm


def curvature(fd: FundamentalData) -> CurvatureData:
    E, F, G, l, m, n = fd.E, fd.F, fd.G, fd.l, fd.m, fd.n
    det = fd.det
    H = (E * n - 2.0 * F * m + G * l) / (2.0 * det)
    K = (l * n - m * m) / det
    root = math.sqrt(max(H * H - K, 0.0))
    k1, k2 = H + root, H - root

    e1 = _principal_vector(fd, k1)
    if e1 is None:
        # umbilic: every direction is principal
        e1 = fd.f_x / math.sqrt(E)
    e2 = np.cross(fd.N, e1)
    return CurvatureData(H=H, K_gauss=K, kappa1=k1, kappa2=k2, e1=e1, e2=e2)


def normal_curvature(fd: FundamentalData, v: np.ndarray) -> float:
    """II(v, v) / I(v, v) for an ambient tangent vector v"""
    a, b = np.linalg.solve(fd.first_form(), np.array([v @ fd.f_x, v @ fd.f_y]))
    second = fd.l * a * a + 2.0 * fd.m * a * b + fd.n * b * b
    first = fd.E * a * a + 2.0 * fd.F * a * b + fd.G * b * b
    return float(second / first)
