"""
Exception hierarchy for the isothermic meshing toolkit.
Every failure raised by the library derives from IsoMeshError so the CLI
can map it to an exit code with a single except clause.
"""

from typing import Optional, Tuple

Point = Tuple[float, float]


class IsoMeshError(Exception):
    """Base class for all library errors"""


class PointError(IsoMeshError):
    """Error attached to a domain point"""

    def __init__(self, message: str, point: Optional[Point] = None):
        self.point = point
        if point is not None:
            message = f"{message} at ({point[0]:.6g}, {point[1]:.6g})"
        super().__init__(message)


# ─── Surface definition ──────────────────────────────────────────────────────

class SurfaceError(IsoMeshError):
    """Problems with a surface definition or its evaluation"""


class SurfaceSyntaxError(SurfaceError):
    """Parse failure in a surface document or expression"""

    def __init__(self, position: int, message: str, line: Optional[int] = None):
        self.position = position
        self.line = line
        where = f"line {line}, col {position}" if line is not None else f"col {position}"
        super().__init__(f"syntax error ({where}): {message}")


class UnknownBuiltin(SurfaceError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown builtin surface '{name}'")


class UnboundIdentifier(SurfaceError):
    def __init__(self, name: str, position: Optional[int] = None):
        self.name = name
        self.position = position
        suffix = f" (col {position})" if position is not None else ""
        super().__init__(f"unbound identifier '{name}'{suffix}")


class DomainError(SurfaceError):
    """Domain rectangle is empty or malformed"""


class OutOfDomain(PointError, SurfaceError):
    def __init__(self, point: Point):
        super().__init__("point outside the surface domain", point)


class DegenerateImmersion(PointError, SurfaceError):
    def __init__(self, point: Point):
        super().__init__("f_x and f_y are linearly dependent", point)


class EvaluationError(PointError, SurfaceError):
    """Expression evaluation hit a math domain error"""

    def __init__(self, point: Point, detail: str):
        self.detail = detail
        super().__init__(f"surface evaluation failed ({detail})", point)


# ─── Geometry ────────────────────────────────────────────────────────────────

class GeometryError(IsoMeshError):
    """Failures of the differential-geometric kernels"""


class DegenerateMetric(GeometryError):
    def __init__(self, det: float):
        self.det = det
        super().__init__(f"first fundamental form is degenerate (EG-F^2={det:.3e})")


class UmbilicPoint(PointError, GeometryError):
    def __init__(self, point: Optional[Point] = None):
        super().__init__("umbilic point: rotation angle is undetermined", point)


class HypothesisViolated(GeometryError):
    def __init__(self, case: str, detail: str):
        self.case = case
        super().__init__(f"hypothesis of case '{case}' does not hold: {detail}")


# ─── Integration ─────────────────────────────────────────────────────────────

class IntegrationError(IsoMeshError):
    """Failures while marching the chart"""


class UmbilicEncountered(PointError, IntegrationError):
    def __init__(self, point: Point):
        super().__init__("umbilic point reached by an integration stage", point)


class LeftDomain(PointError, IntegrationError):
    def __init__(self, point: Point):
        super().__init__("integration stage left the surface domain", point)


class SeedUmbilic(PointError, IntegrationError):
    def __init__(self, point: Point):
        super().__init__("seed point is umbilic", point)


class SeedOutOfDomain(PointError, IntegrationError):
    def __init__(self, point: Point):
        super().__init__("seed point is outside the surface domain", point)


# ─── Verification / reporting ────────────────────────────────────────────────

class VerificationError(IsoMeshError):
    """Mesh cannot be verified"""


class MeshTooSmall(VerificationError):
    def __init__(self, shape: Tuple[int, int]):
        super().__init__(f"mesh needs a 3x3 valid interior, got valid block {shape}")


class NotConformalEnough(VerificationError):
    def __init__(self, conformality: float, limit: float):
        self.conformality = conformality
        super().__init__(
            f"Hopf check needs a conformal chart: conformality {conformality:.3e} > {limit:.1e}"
        )


class ConfigError(IsoMeshError):
    """Invalid run configuration"""


class SchemaError(IsoMeshError):
    """Report file does not match the expected schema"""


class Mismatch(IsoMeshError):
    """Recomputed diagnostics differ from the stored report"""
