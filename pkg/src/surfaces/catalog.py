"""
Built-in surface catalog.

Every entry evaluates its 2-jet in closed form. Surfaces of revolution share
one helper working from a profile curve (X, Z) revolved about the z axis as
(X cos y, X sin y, Z). All entries except the unduloid also publish the
equivalent expression document so both construction paths can be compared.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..config.settings import numerics_config
from ..utils.errors import SurfaceError, UnboundIdentifier

TWO_PI = 2.0 * math.pi

JetArrays = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]
DomainBounds = Tuple[float, float, float, float]


def revolution_jet(X: float, X1: float, X2: float,
                   Z: float, Z1: float, Z2: float, theta: float) -> JetArrays:
    """Jets of (X(x) cos y, X(x) sin y, Z(x)) given the profile 2-jet at x"""
    c, s = math.cos(theta), math.sin(theta)
    return (
        np.array([X * c, X * s, Z]),
        np.array([X1 * c, X1 * s, Z1]),
        np.array([-X * s, X * c, 0.0]),
        np.array([X2 * c, X2 * s, Z2]),
        np.array([-X1 * s, X1 * c, 0.0]),
        np.array([-X * c, -X * s, 0.0]),
    )


@dataclass(frozen=True)
class BuiltinDescriptor:
    name: str
    description: str
    params: Dict[str, float]
    domain: DomainBounds


class BuiltinSurface:
    """Base class; subclasses set name, description and defaults"""

    name = ""
    description = ""
    defaults: Dict[str, float] = {}

    def __init__(self, **params: float):
        for key in params:
            if key not in self.defaults:
                raise UnboundIdentifier(key)
        self.params: Dict[str, float] = {**self.defaults,
                                         **{k: float(v) for k, v in params.items()}}
        for key, value in self.params.items():
            if not math.isfinite(value):
                raise SurfaceError(f"{self.name}: parameter {key} must be finite")
        self._validate()

    def _validate(self) -> None:
        pass

    def domain(self) -> DomainBounds:
        raise NotImplementedError

    def jet(self, x: float, y: float) -> JetArrays:
        raise NotImplementedError

    def position(self, x: float, y: float) -> np.ndarray:
        return self.jet(x, y)[0]

    def expression(self) -> Optional[str]:
        """Equivalent surface document, or None when no closed form exists"""
        return None

    def _param_lines(self) -> str:
        return "".join(f"param {k} = {v!r}\n" for k, v in self.params.items())

    def describe(self) -> BuiltinDescriptor:
        return BuiltinDescriptor(self.name, self.description, dict(self.params), self.domain())


class Plane(BuiltinSurface):
    name = "plane"
    description = "flat plane z = 0 (every point umbilic)"

    def domain(self) -> DomainBounds:
        return (-1.0, 1.0, -1.0, 1.0)

    def jet(self, x: float, y: float) -> JetArrays:
        zero = np.zeros(3)
        return (np.array([x, y, 0.0]), np.array([1.0, 0.0, 0.0]),
                np.array([0.0, 1.0, 0.0]), zero, zero.copy(), zero.copy())

    def expression(self) -> str:
        return "# plane\nX = x\nY = y\nZ = 0\ndomain = -1, 1, -1, 1\n"


class Cylinder(BuiltinSurface):
    name = "cylinder"
    description = "circular cylinder (R cos y, R sin y, x)"
    defaults = {"R": 1.0}

    def _validate(self) -> None:
        if self.params["R"] <= 0:
            raise SurfaceError("cylinder: R must be positive")

    def domain(self) -> DomainBounds:
        return (-5.0, 5.0, -TWO_PI, TWO_PI)

    def jet(self, x: float, y: float) -> JetArrays:
        R = self.params["R"]
        return revolution_jet(R, 0.0, 0.0, x, 1.0, 0.0, y)

    def expression(self) -> str:
        return (f"# cylinder\n{self._param_lines()}"
                "X = R*cos(y)\nY = R*sin(y)\nZ = x\n"
                "domain = -5, 5, -2*pi, 2*pi\n")


class Torus(BuiltinSurface):
    name = "torus"
    description = "torus of revolution ((R + r cos x) cos y, (R + r cos x) sin y, r sin x)"
    defaults = {"R": 2.0, "r": 1.0}

    def _validate(self) -> None:
        R, r = self.params["R"], self.params["r"]
        if not 0 < r < R:
            raise SurfaceError("torus: need 0 < r < R")

    def domain(self) -> DomainBounds:
        return (0.0, TWO_PI, 0.0, TWO_PI)

    def jet(self, x: float, y: float) -> JetArrays:
        R, r = self.params["R"], self.params["r"]
        cx, sx = math.cos(x), math.sin(x)
        return revolution_jet(R + r * cx, -r * sx, -r * cx, r * sx, r * cx, -r * sx, y)

    def expression(self) -> str:
        return (f"# torus\n{self._param_lines()}"
                "X = (R + r*cos(x))*cos(y)\nY = (R + r*cos(x))*sin(y)\nZ = r*sin(x)\n"
                "domain = 0, 2*pi, 0, 2*pi\n")


class Sphere(BuiltinSurface):
    name = "sphere"
    description = "round sphere in latitude/longitude, poles excluded"
    defaults = {"R": 1.0}

    def _validate(self) -> None:
        if self.params["R"] <= 0:
            raise SurfaceError("sphere: R must be positive")

    def domain(self) -> DomainBounds:
        return (-1.4, 1.4, 0.0, TWO_PI)

    def jet(self, x: float, y: float) -> JetArrays:
        R = self.params["R"]
        cx, sx = math.cos(x), math.sin(x)
        return revolution_jet(R * cx, -R * sx, -R * cx, R * sx, R * cx, -R * sx, y)

    def expression(self) -> str:
        return (f"# sphere\n{self._param_lines()}"
                "X = R*cos(x)*cos(y)\nY = R*cos(x)*sin(y)\nZ = R*sin(x)\n"
                "domain = -1.4, 1.4, 0, 2*pi\n")


class Catenoid(BuiltinSurface):
    name = "catenoid"
    description = "catenoid (c cosh(x/c) cos y, c cosh(x/c) sin y, x), isothermal chart"
    defaults = {"c": 1.0}

    def _validate(self) -> None:
        if self.params["c"] <= 0:
            raise SurfaceError("catenoid: c must be positive")

    def domain(self) -> DomainBounds:
        return (-1.5, 1.5, 0.0, TWO_PI)

    def jet(self, x: float, y: float) -> JetArrays:
        c = self.params["c"]
        ch, sh = math.cosh(x / c), math.sinh(x / c)
        return revolution_jet(c * ch, sh, ch / c, x, 1.0, 0.0, y)

    def expression(self) -> str:
        return (f"# catenoid\n{self._param_lines()}"
                "X = c*cosh(x/c)*cos(y)\nY = c*cosh(x/c)*sin(y)\nZ = x\n"
                "domain = -1.5, 1.5, 0, 2*pi\n")


class ShearedCylinder(BuiltinSurface):
    name = "sheared_cylinder"
    description = "cylinder in the oblique chart (R cos y, R sin y, x + c y)"
    defaults = {"R": 2.0, "c": 0.5}

    def _validate(self) -> None:
        if self.params["R"] <= 0:
            raise SurfaceError("sheared_cylinder: R must be positive")

    def domain(self) -> DomainBounds:
        return (-5.0, 5.0, -TWO_PI, TWO_PI)

    def jet(self, x: float, y: float) -> JetArrays:
        R, c = self.params["R"], self.params["c"]
        cy, sy = math.cos(y), math.sin(y)
        zero = np.zeros(3)
        return (
            np.array([R * cy, R * sy, x + c * y]),
            np.array([0.0, 0.0, 1.0]),
            np.array([-R * sy, R * cy, c]),
            zero,
            zero.copy(),
            np.array([-R * cy, -R * sy, 0.0]),
        )

    def expression(self) -> str:
        return (f"# sheared cylinder\n{self._param_lines()}"
                "X = R*cos(y)\nY = R*sin(y)\nZ = x + c*y\n"
                "domain = -5, 5, -2*pi, 2*pi\n")


class Graph(BuiltinSurface):
    name = "graph"
    description = "graph of the polynomial z = x^2 y"

    def domain(self) -> DomainBounds:
        return (-1.0, 1.0, -1.0, 1.0)

    def jet(self, x: float, y: float) -> JetArrays:
        return (
            np.array([x, y, x * x * y]),
            np.array([1.0, 0.0, 2.0 * x * y]),
            np.array([0.0, 1.0, x * x]),
            np.array([0.0, 0.0, 2.0 * y]),
            np.array([0.0, 0.0, 2.0 * x]),
            np.zeros(3),
        )

    def expression(self) -> str:
        return "# graph\nX = x\nY = y\nZ = x^2*y\ndomain = -1, 1, -1, 1\n"


class DelaunayProfile:
    """
    Arclength profile of a Delaunay unduloid.

    The meridian is traced by a focus of an ellipse with semi-axes a > b
    rolling on the axis. In arclength s with tangent angle phi it solves
        X' = cos phi,  Z' = sin phi,  phi' = 2H - sin(phi)/X,   H = 1/(2a),
    started at the neck X(0) = a - sqrt(a^2 - b^2), Z(0) = 0, phi(0) = pi/2.
    """

    def __init__(self, a: float, b: float, length: float):
        self.a = a
        self.b = b
        self.length = length
        self.mean_curvature = 1.0 / (2.0 * a)
        self.neck = a - math.sqrt(a * a - b * b)

        y0 = [self.neck, 0.0, 0.5 * math.pi]
        opts = dict(method="DOP853", dense_output=True,
                    rtol=numerics_config.PROFILE_RTOL, atol=numerics_config.PROFILE_ATOL)
        self._forward = solve_ivp(self._rhs, (0.0, length), y0, **opts)
        self._backward = solve_ivp(self._rhs, (0.0, -length), y0, **opts)
        for sol in (self._forward, self._backward):
            if not sol.success:
                raise SurfaceError(f"unduloid profile integration failed: {sol.message}")

    def _rhs(self, s: float, u: np.ndarray) -> list:
        X, _, phi = u
        return [math.cos(phi), math.sin(phi), 2.0 * self.mean_curvature - math.sin(phi) / X]

    def state(self, s: float) -> Tuple[float, float, float]:
        sol = self._forward if s >= 0.0 else self._backward
        X, Z, phi = sol.sol(s)
        return float(X), float(Z), float(phi)

    def jet(self, s: float) -> Tuple[float, float, float, float, float, float]:
        """(X, X', X'', Z, Z', Z'') at arclength s"""
        X, Z, phi = self.state(s)
        cp, sp = math.cos(phi), math.sin(phi)
        dphi = 2.0 * self.mean_curvature - sp / X
        return X, cp, -sp * dphi, Z, sp, cp * dphi


class Unduloid(BuiltinSurface):
    name = "unduloid"
    description = "Delaunay unduloid, profile integrated numerically in arclength"
    defaults = {"a": 1.0, "b": 0.8, "length": 6.0}

    def _validate(self) -> None:
        a, b, length = self.params["a"], self.params["b"], self.params["length"]
        if not 0 < b < a:
            raise SurfaceError("unduloid: need 0 < b < a")
        if length <= 0:
            raise SurfaceError("unduloid: length must be positive")
        self.profile = DelaunayProfile(a, b, length)

    def domain(self) -> DomainBounds:
        length = self.params["length"]
        return (-length, length, 0.0, TWO_PI)

    def jet(self, x: float, y: float) -> JetArrays:
        return revolution_jet(*self.profile.jet(x), y)


BUILTINS = {
    cls.name: cls
    for cls in (Plane, Cylinder, Torus, Sphere, Catenoid, ShearedCylinder, Graph, Unduloid)
}
