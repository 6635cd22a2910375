"""Rational points on conics by sweeping lines through a known point."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .exact import determinant
from .parser import Equation


class Vertical(enum.Enum):
    """Slope of a vertical line."""

    VERTICAL = "vertical"

    def __str__(self):
        return "vertical"


VERTICAL = Vertical.VERTICAL

Point = tuple  # (Fraction, Fraction)


@dataclass(frozen=True)
class Conic:
    """a*x^2 + b*x*y + c*y^2 + d*x + e*y + f = 0, non-degenerate."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction
    f: Fraction
    names: tuple[str, str] = ("x", "y")

    def __post_init__(self):
        for field in "abcdef":
            object.__setattr__(self, field, Fraction(getattr(self, field)))
        if not (self.a or self.b or self.c):
            raise DomainError("conic must have total degree exactly 2")
        if not determinant(self.matrix()):
            raise DomainError("degenerate conic (zero determinant)")

    def matrix(self):
        a, b, c, d, e, f = self.a, self.b, self.c, self.d, self.e, self.f
        return [[a, b / 2, d / 2], [b / 2, c, e / 2], [d / 2, e / 2, f]]

    @classmethod
    def from_equation(cls, eq: Equation) -> Conic:
        if len(eq.variables) != 2 or eq.degree != 2:
            raise DomainError("a conic needs a degree-2 equation in exactly two variables")
        x, y = eq.variables
        co = eq.lhs.coefficient
        return cls(
            co(**{x: 2}), co(**{x: 1, y: 1}), co(**{y: 2}),
            co(**{x: 1}), co(**{y: 1}), co(),
            names=(x, y),
        )

    def __call__(self, x, y) -> Fraction:
        return (self.a * x * x + self.b * x * y + self.c * y * y
                + self.d * x + self.e * y + self.f)

    def contains(self, point: Point) -> bool:
        return self(*point) == 0


def _as_point(point) -> Point:
    return (Fraction(point[0]), Fraction(point[1]))


def sweep(conic: Conic, base: Point, m) -> Point:
    """Second intersection of the line through ``base`` with slope ``m``.

    The line is x = x0 + s, y = y0 + m*s (or x = x0, y = y0 + s when vertical).
    Substituting gives A*s^2 + B*s = 0 because ``base`` is on the conic, so the
    other root is s = -B/A and no square root is ever taken.  A tangent line
    gives s = 0, i.e. the base point itself.
    """
    x0, y0 = base = _as_point(base)
    if not conic.contains(base):
        raise DomainError(f"base point {x0}, {y0} is not on the conic")
    a, b, c, d, e = conic.a, conic.b, conic.c, conic.d, conic.e
    if m is VERTICAL:
        A = c
        B = b * x0 + 2 * c * y0 + e
        dx, dy = Fraction(0), Fraction(1)
    else:
        m = Fraction(m)
        A = a + b * m + c * m * m
        B = 2 * a * x0 + b * y0 + b * m * x0 + 2 * c * m * y0 + d + e * m
        dx, dy = Fraction(1), m
    if not A:
        raise DomainError("second intersection is at infinity for this slope")
    s = -B / A
    return (x0 + s * dx, y0 + s * dy)


def slope_between(conic: Conic, base: Point, other: Point):
    """Slope m with sweep(conic, base, m) == other."""
    base, other = _as_point(base), _as_point(other)
    for p in (base, other):
        if not conic.contains(p):
            raise DomainError(f"point {p[0]}, {p[1]} is not on the conic")
    if base == other:
        raise DomainError("slope undefined; use tangent")
    if base[0] == other[0]:
        return VERTICAL
    return (other[1] - base[1]) / (other[0] - base[0])


def pythagorean_triple(m) -> tuple[int, int, int]:
    """Primitive triple from the unit-circle point of slope m = a/b."""
    m = Fraction(m)
    if m <= 0 or m == 1:
        raise DomainError("degenerate triple: slope must be positive and not 1")
    a, b = m.numerator, m.denominator
    p, q, r = abs(b * b - a * a), 2 * a * b, a * a + b * b
    g = math.gcd(p, q, r)
    return p // g, q // g, r // g
