"""
Surface definitions and exact 2-jet evaluation.

A surface is either a catalog builtin (`builtin:<name>?k=v,k=v`) or a
line-oriented document:

    # comments start with '#'
    param R = 2
    X = (R + cos(x))*cos(y)
    Y = (R + cos(x))*sin(y)
    Z = sin(x)
    domain = 0, 2*pi, 0, 2*pi

Statements may also be separated by ';' on a single line. Without a
`domain` statement the rectangle defaults to [0, 2pi] x [0, 2pi].
"""

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import numerics_config
from ..utils.errors import (
    DegenerateImmersion, DomainError, EvaluationError, OutOfDomain,
    SurfaceError, SurfaceSyntaxError, UnknownBuiltin,
)
from .catalog import BUILTINS, BuiltinDescriptor, BuiltinSurface
from .expression import RESERVED, CompiledTriple, Expr, Var, Neg, BinOp, Call, parse_expression
from .hyperdual import HyperDual

Point = Tuple[float, float]

BUILTIN_PREFIX = "builtin:"
COMPONENTS = ("X", "Y", "Z")
# angle charts are the common case for documents without a domain line
DEFAULT_DOMAIN = "0, 2*pi, 0, 2*pi"

_PARAM_RE = re.compile(r"^param\s+([A-Za-z_]\w*)\s*=\s*(.*)$")
_ASSIGN_RE = re.compile(r"^(X|Y|Z|domain|name)\s*=\s*(.*)$")


@dataclass(frozen=True)
class Domain:
    """Closed parameter rectangle [x_min, x_max] x [y_min, y_max]"""
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        values = self.as_tuple()
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"domain bounds must be finite: {values}")
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise DomainError(f"domain rectangle has non-positive side: {values}")

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.x_min, self.x_max, self.y_min, self.y_max)

    @property
    def center(self) -> Point:
        return (0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))

    def contains(self, x: float, y: float) -> bool:
        # closed rectangle with a rounding allowance
        slack = 1e-12 * max(1.0, *(abs(v) for v in self.as_tuple()))
        return (self.x_min - slack <= x <= self.x_max + slack
                and self.y_min - slack <= y <= self.y_max + slack)


@dataclass(frozen=True)
class SurfaceDef:
    """Immutable, shareable surface description"""
    name: str
    kind: str                       # 'builtin' or 'expression'
    domain: Domain
    params: Dict[str, float]
    source: str
    builtin: Optional[BuiltinSurface] = field(default=None, compare=False, repr=False)
    components: Optional[CompiledTriple] = field(default=None, compare=False, repr=False)

    def contains(self, p: Point) -> bool:
        return self.domain.contains(p[0], p[1])


@dataclass(frozen=True)
class Jet2:
    """Position and first/second partials of the immersion at a point"""
    f: np.ndarray
    f_x: np.ndarray
    f_y: np.ndarray
    f_xx: np.ndarray
    f_xy: np.ndarray
    f_yy: np.ndarray
    point: Point


# ─── Parsing ─────────────────────────────────────────────────────────────────

def parse_surface(text: str) -> SurfaceDef:
    """Parse a builtin URI or a surface document into a validated SurfaceDef"""
    stripped = text.strip()
    if stripped.startswith(BUILTIN_PREFIX):
        return _parse_builtin(stripped)
    return _parse_document(text)


def load_surface(spec: str) -> SurfaceDef:
    """Accept a builtin URI or a path to a surface document"""
    if spec.strip().startswith(BUILTIN_PREFIX):
        return parse_surface(spec)
    try:
        text = Path(spec).read_text(encoding="utf-8")
    except OSError as e:
        raise SurfaceError(f"cannot read surface file '{spec}': {e}")
    return parse_surface(text)


def _parse_builtin(text: str) -> SurfaceDef:
    body = text[len(BUILTIN_PREFIX):]
    name, _, query = body.partition("?")
    name = name.strip()
    cls = BUILTINS.get(name)
    if cls is None:
        raise UnknownBuiltin(name)

    params: Dict[str, float] = {}
    column = len(BUILTIN_PREFIX) + len(name) + 2
    for item in query.split(","):
        if item.strip():
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or not key:
                raise SurfaceSyntaxError(column, f"expected k=v, found '{item.strip()}'")
            try:
                params[key] = float(value)
            except ValueError:
                raise SurfaceSyntaxError(column + len(item) - len(value),
                                         f"parameter '{key}' needs a number")
        column += len(item) + 1

    builtin = cls(**params)
    return SurfaceDef(
        name=name,
        kind="builtin",
        domain=Domain(*builtin.domain()),
        params=dict(builtin.params),
        source=text,
        builtin=builtin,
    )


def _statements(text: str) -> List[Tuple[str, int, int]]:
    """Split a document into (statement, line, column) triples"""
    out = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        column = 1
        for chunk in line.split(";"):
            stripped = chunk.strip()
            if stripped:
                out.append((stripped, line_no, column + chunk.index(stripped)))
            column += len(chunk) + 1
    return out


def _has_variables(node: Expr) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return _has_variables(node.operand)
    if isinstance(node, BinOp):
        return _has_variables(node.left) or _has_variables(node.right)
    if isinstance(node, Call):
        return _has_variables(node.argument)
    return False


def _parse_document(text: str) -> SurfaceDef:
    params: Dict[str, float] = {}
    assignments: Dict[str, Tuple[str, int, int]] = {}

    for stmt, line, col in _statements(text):
        m = _PARAM_RE.match(stmt)
        if m:
            pname, value = m.group(1), m.group(2).strip()
            if pname in RESERVED:
                raise SurfaceSyntaxError(col, f"parameter name '{pname}' is reserved", line)
            if pname in params:
                raise SurfaceSyntaxError(col, f"parameter '{pname}' declared twice", line)
            try:
                params[pname] = float(value)
            except ValueError:
                raise SurfaceSyntaxError(col + stmt.index("=") + 1,
                                         f"parameter '{pname}' needs a number", line)
            if not math.isfinite(params[pname]):
                raise SurfaceSyntaxError(col, f"parameter '{pname}' must be finite", line)
            continue
        m = _ASSIGN_RE.match(stmt)
        if not m:
            raise SurfaceSyntaxError(
                col, "expected 'param', 'X', 'Y', 'Z', 'domain' or 'name' statement", line)
        key = m.group(1)
        if key in assignments:
            raise SurfaceSyntaxError(col, f"'{key}' assigned twice", line)
        assignments[key] = (m.group(2), line, col + m.start(2))

    for key in COMPONENTS:
        if key not in assignments:
            raise SurfaceSyntaxError(0, f"missing component '{key}'")
    if "domain" not in assignments:
        assignments["domain"] = (DEFAULT_DOMAIN, 0, 1)

    components = []
    for key in COMPONENTS:
        expr_text, line, col = assignments[key]
        components.append(parse_expression(expr_text, params, line, col - 1))

    domain_text, line, col = assignments["domain"]
    parts = domain_text.split(",")
    if len(parts) != 4:
        raise SurfaceSyntaxError(col, "domain needs four bounds x_min,x_max,y_min,y_max", line)
    bounds = []
    offset = col - 1
    for part in parts:
        node = parse_expression(part, params, line, offset)
        if _has_variables(node):
            raise SurfaceSyntaxError(offset + 1, "domain bounds must be constant", line)
        try:
            bounds.append(float(node.compile()(0.0, 0.0)))
        except (ValueError, ZeroDivisionError, OverflowError) as e:
            raise SurfaceSyntaxError(offset + 1, f"domain bound cannot be evaluated: {e}", line)
        offset += len(part) + 1

    name = assignments["name"][0].strip() if "name" in assignments else "expression"
    return SurfaceDef(
        name=name,
        kind="expression",
        domain=Domain(*bounds),
        params=params,
        source=text,
        components=CompiledTriple(tuple(components)),
    )


def expression_twin(surface: SurfaceDef) -> SurfaceDef:
    """Expression-document version of a builtin; expression surfaces pass through"""
    if surface.builtin is None:
        return surface
    doc = surface.builtin.expression()
    if doc is None:
        raise SurfaceError(f"builtin '{surface.name}' has no expression form")
    return parse_surface(doc)


# ─── Evaluation ──────────────────────────────────────────────────────────────

def _check_point(surface: SurfaceDef, p: Point) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)) or not surface.domain.contains(x, y):
        raise OutOfDomain((x, y))
    return x, y


def evaluate(surface: SurfaceDef, p: Point) -> np.ndarray:
    """Position f(p) without derivatives"""
    x, y = _check_point(surface, p)
    if surface.builtin is not None:
        return surface.builtin.position(x, y)
    try:
        return np.array([float(c) for c in surface.components(x, y)])
    except (ValueError, ZeroDivisionError, OverflowError) as e:
        raise EvaluationError((x, y), str(e))


def jet(surface: SurfaceDef, p: Point) -> Jet2:
    """
    Exact 2-jet at p: closed form for builtins, hyper-dual evaluation for
    expression surfaces. The immersion check uses the per-point length
    scale L^2 = |f_x| |f_y|, i.e. |f_x x f_y| <= 1e-10 * L^2.
    """
    x, y = _check_point(surface, p)
    if surface.builtin is not None:
        f, f_x, f_y, f_xx, f_xy, f_yy = surface.builtin.jet(x, y)
    else:
        try:
            values = surface.components(HyperDual.variable(x, 0), HyperDual.variable(y, 1))
        except (ValueError, ZeroDivisionError, OverflowError) as e:
            raise EvaluationError((x, y), str(e))
        comps = [HyperDual.lift(v) for v in values]
        f = np.array([c.v for c in comps])
        f_x = np.array([c.x for c in comps])
        f_y = np.array([c.y for c in comps])
        f_xx = np.array([c.xx for c in comps])
        f_xy = np.array([c.xy for c in comps])
        f_yy = np.array([c.yy for c in comps])

    scale = float(np.linalg.norm(f_x) * np.linalg.norm(f_y))
    cross = float(np.linalg.norm(np.cross(f_x, f_y)))
    if not math.isfinite(cross) or cross <= numerics_config.IMMERSION_FACTOR * scale:
        raise DegenerateImmersion((x, y))
    return Jet2(f, f_x, f_y, f_xx, f_xy, f_yy, (x, y))


def builtin_catalog() -> List[BuiltinDescriptor]:
    """Descriptors of all builtins at default parameters, sorted by name"""
    return [BUILTINS[name]().describe() for name in sorted(BUILTINS)]
