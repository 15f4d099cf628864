"""
Second-order hyper-dual numbers in two variables.

A HyperDual carries a value together with its two first partials and all
three second partials with respect to (x, y). Seeding x = HyperDual.variable(x0, 0)
and y = HyperDual.variable(y0, 1) and evaluating any expression built from
the supported operations yields the exact 2-jet of that expression in one
pass (no finite differencing).

The elementary functions below accept plain floats as well, so the same
compiled expression evaluates either a value or a full jet.
"""

import math
from typing import Union

Number = Union[float, int, "HyperDual"]


class HyperDual:
    """Truncated second-order Taylor number a + grad·ε + ½ εᵀ H ε"""

    __slots__ = ("v", "x", "y", "xx", "xy", "yy")

    def __init__(self, v: float, x: float = 0.0, y: float = 0.0,
                 xx: float = 0.0, xy: float = 0.0, yy: float = 0.0):
        self.v = v
        self.x = x
        self.y = y
        self.xx = xx
        self.xy = xy
        self.yy = yy

    @classmethod
    def variable(cls, value: float, index: int) -> "HyperDual":
        """Unit-seeded independent variable (index 0 -> x, 1 -> y)"""
        if index == 0:
            return cls(float(value), 1.0, 0.0)
        return cls(float(value), 0.0, 1.0)

    @staticmethod
    def lift(value: Number) -> "HyperDual":
        if isinstance(value, HyperDual):
            return value
        return HyperDual(float(value))

    def is_constant(self) -> bool:
        return not (self.x or self.y or self.xx or self.xy or self.yy)

    def chain(self, f0: float, f1: float, f2: float) -> "HyperDual":
        """Apply a scalar function g with g=f0, g'=f1, g''=f2 at self.v"""
        return HyperDual(
            f0,
            f1 * self.x,
            f1 * self.y,
            f2 * self.x * self.x + f1 * self.xx,
            f2 * self.x * self.y + f1 * self.xy,
            f2 * self.y * self.y + f1 * self.yy,
        )

    # Arithmetic

    def __add__(self, other: Number) -> "HyperDual":
        o = HyperDual.lift(other)
        return HyperDual(self.v + o.v, self.x + o.x, self.y + o.y,
                         self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "HyperDual":
        o = HyperDual.lift(other)
        return HyperDual(self.v - o.v, self.x - o.x, self.y - o.y,
                         self.xx - o.xx, self.xy - o.xy, self.yy - o.yy)

    def __rsub__(self, other: Number) -> "HyperDual":
        return HyperDual.lift(other) - self

    def __neg__(self) -> "HyperDual":
        return HyperDual(-self.v, -self.x, -self.y, -self.xx, -self.xy, -self.yy)

    def __pos__(self) -> "HyperDual":
        return self

    def __mul__(self, other: Number) -> "HyperDual":
        if not isinstance(other, HyperDual):
            c = float(other)
            return HyperDual(self.v * c, self.x * c, self.y * c,
                             self.xx * c, self.xy * c, self.yy * c)
        a, b = self, other
        return HyperDual(
            a.v * b.v,
            a.x * b.v + a.v * b.x,
            a.y * b.v + a.v * b.y,
            a.xx * b.v + 2.0 * a.x * b.x + a.v * b.xx,
            a.xy * b.v + a.x * b.y + a.y * b.x + a.v * b.xy,
            a.yy * b.v + 2.0 * a.y * b.y + a.v * b.yy,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "HyperDual":
        if self.v == 0.0:
            raise ZeroDivisionError("HyperDual division by zero real part")
        inv = 1.0 / self.v
        return self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other: Number) -> "HyperDual":
        if not isinstance(other, HyperDual):
            c = float(other)
            if c == 0.0:
                raise ZeroDivisionError("HyperDual division by zero")
            return self * (1.0 / c)
        return self * other.reciprocal()

    def __rtruediv__(self, other: Number) -> "HyperDual":
        return HyperDual.lift(other) * self.reciprocal()

    def __pow__(self, other: Number) -> "HyperDual":
        if isinstance(other, HyperDual) and not other.is_constant():
            # a^b = exp(b ln a), needs a > 0
            return exp(other * ln(self))
        p = other.v if isinstance(other, HyperDual) else float(other)
        return self.chain(*_power_derivatives(self.v, p))

    def __rpow__(self, other: Number) -> "HyperDual":
        return HyperDual.lift(other) ** self

    def __repr__(self) -> str:
        return (f"HyperDual(v={self.v}, x={self.x}, y={self.y}, "
                f"xx={self.xx}, xy={self.xy}, yy={self.yy})")


def _power_derivatives(v: float, p: float):
    if p == 0.0:
        return 1.0, 0.0, 0.0
    if v < 0.0 and not float(p).is_integer():
        raise ValueError("math domain error: negative base with fractional exponent")
    if v == 0.0 and p < 2.0 and p not in (1.0,):
        raise ValueError("math domain error: derivative of power undefined at zero")
    f0 = v ** p
    f1 = p * v ** (p - 1.0) if p != 1.0 else 1.0
    f2 = p * (p - 1.0) * v ** (p - 2.0) if p not in (1.0, 2.0) else (0.0 if p == 1.0 else 2.0)
    return f0, f1, f2


# ─── Elementary functions (float or HyperDual) ───────────────────────────────

def sin(u: Number) -> Number:
    if isinstance(u, HyperDual):
        s, c = math.sin(u.v), math.cos(u.v)
        return u.chain(s, c, -s)
    return math.sin(u)


def cos(u: Number) -> Number:
    if isinstance(u, HyperDual):
        s, c = math.sin(u.v), math.cos(u.v)
        return u.chain(c, -s, -c)
    return math.cos(u)


def tan(u: Number) -> Number:
    if isinstance(u, HyperDual):
        t = math.tan(u.v)
        sec2 = 1.0 + t * t
        return u.chain(t, sec2, 2.0 * t * sec2)
    return math.tan(u)


def exp(u: Number) -> Number:
    if isinstance(u, HyperDual):
        e = math.exp(u.v)
        return u.chain(e, e, e)
    return math.exp(u)


def ln(u: Number) -> Number:
    if isinstance(u, HyperDual):
        if u.v <= 0.0:
            raise ValueError("math domain error: ln of non-positive value")
        inv = 1.0 / u.v
        return u.chain(math.log(u.v), inv, -inv * inv)
    return math.log(u)


def sqrt(u: Number) -> Number:
    if isinstance(u, HyperDual):
        if u.v <= 0.0:
            raise ValueError("math domain error: sqrt jet needs a positive argument")
        r = math.sqrt(u.v)
        return u.chain(r, 0.5 / r, -0.25 / (r * u.v))
    return math.sqrt(u)


def sinh(u: Number) -> Number:
    if isinstance(u, HyperDual):
        s, c = math.sinh(u.v), math.cosh(u.v)
        return u.chain(s, c, s)
    return math.sinh(u)


def cosh(u: Number) -> Number:
    if isinstance(u, HyperDual):
        s, c = math.sinh(u.v), math.cosh(u.v)
        return u.chain(c, s, c)
    return math.cosh(u)


def tanh(u: Number) -> Number:
    if isinstance(u, HyperDual):
        t = math.tanh(u.v)
        d = 1.0 - t * t
        return u.chain(t, d, -2.0 * t * d)
    return math.tanh(u)


def atan(u: Number) -> Number:
    if isinstance(u, HyperDual):
        d = 1.0 / (1.0 + u.v * u.v)
        return u.chain(math.atan(u.v), d, -2.0 * u.v * d * d)
    return math.atan(u)


def power(base: Number, exponent: Number) -> Number:
    if isinstance(base, HyperDual) or isinstance(exponent, HyperDual):
        return HyperDual.lift(base) ** exponent
    if base < 0.0 and not float(exponent).is_integer():
        raise ValueError("math domain error: negative base with fractional exponent")
    return float(base) ** exponent


FUNCTIONS = {
    'sin': sin, 'cos': cos, 'tan': tan, 'exp': exp, 'ln': ln, 'sqrt': sqrt,
    'sinh': sinh, 'cosh': cosh, 'tanh': tanh, 'atan': atan,
}
