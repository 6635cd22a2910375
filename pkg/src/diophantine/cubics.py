"""Chord-and-tangent points on x^3 + y^3 = c, and short Weierstrass curves.

Covers the elliptic group law, Nagell-Lutz torsion certificates, rational
torsion enumeration, division polynomials and division-point preimages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from sympy import factorint

from .errors import DomainError
from .exact import UniPoly, rational_roots

# Largest order tried when looking for [k]P = O.  Rational torsion over Q
# never exceeds order 12, so 16 leaves headroom.
TORSION_ORDER_BOUND = 16
MAX_DIVISION_INDEX = 8


class ThirdPointAtInfinity(DomainError):
    def __init__(self):
        super().__init__("third point at infinity (try the Weierstrass model, which has O)")


# -- diagonal cubics ---------------------------------------------------------


@dataclass(frozen=True)
class DiagonalCubic:
    """x^3 + y^3 = c."""

    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if not self.c:
            raise DomainError("c must be nonzero")

    def contains(self, point) -> bool:
        x, y = point
        return Fraction(x) ** 3 + Fraction(y) ** 3 == self.c

    def _require(self, point):
        point = (Fraction(point[0]), Fraction(point[1]))
        if not self.contains(point):
            raise DomainError(f"point {point[0]}, {point[1]} is not on x^3 + y^3 = {self.c}")
        return point


def tangent_line(curve: DiagonalCubic, point) -> tuple[Fraction, Fraction]:
    """(A, B) with A*(x - x0) + B*(y - y0) = 0 the tangent line at ``point``."""
    x0, y0 = curve._require(point)
    return x0 * x0, y0 * y0


def substituted_cubic(curve: DiagonalCubic, slope: Fraction, intercept: Fraction) -> UniPoly:
    """x^3 + (slope*x + intercept)^3 - c as a polynomial in x."""
    line = UniPoly([intercept, slope])
    x = UniPoly.gen()
    return x**3 + line**3 - curve.c


def _third_point(curve, slope, intercept, known_x_sum):
    cubic = 1 + slope**3
    if not cubic:
        raise ThirdPointAtInfinity()
    # Vieta: the three roots sum to -(x^2 coefficient)/(x^3 coefficient)
    x3 = -3 * slope**2 * intercept / cubic - known_x_sum
    return x3, slope * x3 + intercept


def tangent_step(curve: DiagonalCubic, point):
    """Third intersection of the tangent at ``point`` with the curve."""
    x0, y0 = curve._require(point)
    if not y0:
        # vertical tangent; the curve is symmetric in x and y
        y, x = tangent_step(curve, (y0, x0))
        return x, y
    slope = -(x0 * x0) / (y0 * y0)
    intercept = y0 - slope * x0
    return _third_point(curve, slope, intercept, 2 * x0)


def secant_step(curve: DiagonalCubic, p, q):
    """Third intersection of the line through two distinct points."""
    p, q = curve._require(p), curve._require(q)
    if p == q:
        raise DomainError("points coincide; use tangent_step")
    (x1, y1), (x2, y2) = p, q
    if x1 == x2:
        y, x = secant_step(curve, (y1, x1), (y2, x2))
        return x, y
    slope = (y2 - y1) / (x2 - x1)
    intercept = y1 - slope * x1
    return _third_point(curve, slope, intercept, x1 + x2)


def tangent_iterates(curve: DiagonalCubic, point, steps: int) -> list:
    """Apply tangent_step ``steps`` times, returning every new point."""
    out = []
    for _ in range(steps):
        point = tangent_step(curve, point)
        out.append(point)
    return out


# -- Weierstrass curves ------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    """Affine point, or the identity O when both coordinates are None."""

    x: Fraction | None = None
    y: Fraction | None = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __neg__(self):
        return self if self.is_identity else CurvePoint(self.x, -self.y)

    def sort_key(self):
        return (0, 0, 0) if self.is_identity else (1, self.x, self.y)

    def __str__(self):
        return "O" if self.is_identity else f"({self.x}, {self.y})"


O = CurvePoint()


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + a*x + b."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if not self.discriminant:
            raise DomainError("singular curve: 4a^3 + 27b^2 = 0")

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @property
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def rhs(self, x) -> Fraction:
        return x**3 + self.a * x + self.b

    def rhs_poly(self) -> UniPoly:
        return UniPoly([self.b, self.a, 0, 1])

    def contains(self, point: CurvePoint) -> bool:
        return point.is_identity or point.y**2 == self.rhs(point.x)

    def require(self, point: CurvePoint) -> CurvePoint:
        if not self.contains(point):
            raise DomainError(f"point {point} is not on {self}")
        return point

    def __str__(self):
        out = "y^2 = x^3"
        if self.a:
            out += f" {'-' if self.a < 0 else '+'} {abs(self.a)}*x"
        if self.b:
            out += f" {'-' if self.b < 0 else '+'} {abs(self.b)}"
        return out


def to_weierstrass(curve: DiagonalCubic, point):
    """Map x^3 + y^3 = c to v^2 = u^3 - 432c^2 via u = 12c/(x+y), v = 36c(x-y)/(x+y)."""
    x, y = curve._require(point)
    s = x + y
    if not s:
        raise DomainError("point maps to infinity (x + y = 0)")
    c = curve.c
    target = WeierstrassCurve(0, -432 * c * c)
    return target, CurvePoint(12 * c / s, 36 * c * (x - y) / s)


def from_weierstrass(curve: DiagonalCubic, point: CurvePoint):
    """Inverse of to_weierstrass: (x, y) = ((36c + v)/(6u), (36c - v)/(6u))."""
    if point.is_identity or not point.x:
        raise DomainError("point has no affine preimage on the diagonal cubic")
    c, u, v = curve.c, point.x, point.y
    return (36 * c + v) / (6 * u), (36 * c - v) / (6 * u)


def add(curve: WeierstrassCurve, p: CurvePoint, q: CurvePoint) -> CurvePoint:
    if p.is_identity:
        return q
    if q.is_identity:
        return p
    if p.x == q.x:
        if p.y == -q.y:
            return O
        lam = (3 * p.x * p.x + curve.a) / (2 * p.y)
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    x3 = lam * lam - p.x - q.x
    return CurvePoint(x3, lam * (p.x - x3) - p.y)


def multiply(curve: WeierstrassCurve, n: int, p: CurvePoint) -> CurvePoint:
    """[n]P by double-and-add."""
    if n < 0:
        return -multiply(curve, -n, p)
    result, base = O, p
    while n:
        if n & 1:
            result = add(curve, result, base)
        base = add(curve, base, base)
        n >>= 1
    return result


@dataclass(frozen=True)
class TorsionVerdict:
    """Outcome of nagell_lutz_test.

    ``multiple`` is the k for which [k]P produced the verdict: the point
    reached O (torsion), or [k]P failed a Nagell-Lutz condition.  Any multiple
    of a torsion point is torsion, so a failure at any k certifies P.
    """

    torsion: bool
    order: int | None = None
    reason: str = ""
    multiple: int = 1

    def __str__(self):
        if self.torsion:
            return f"Torsion({self.order})"
        where = "P" if self.multiple == 1 else f"[{self.multiple}]P"
        return f"NonTorsion({self.reason} at {where})"


NON_INTEGRAL = "non-integral coordinate"
Y2_NOT_DIVIDING = "y^2 does not divide discriminant"
NO_SMALL_ORDER = "passed integrality but no small order"


def _nagell_lutz_failure(delta: int, q: CurvePoint) -> str | None:
    if q.x.denominator != 1 or q.y.denominator != 1:
        return NON_INTEGRAL
    y = int(q.y)
    if y and delta % (y * y):
        return Y2_NOT_DIVIDING
    return None


def nagell_lutz_test(curve: WeierstrassCurve, point: CurvePoint) -> TorsionVerdict:
    if not curve.is_integral:
        raise DomainError("curve coefficients must be integers; clear denominators first")
    curve.require(point)
    delta = int(curve.discriminant)
    q = point
    for k in range(1, TORSION_ORDER_BOUND + 1):
        if q.is_identity:
            return TorsionVerdict(True, order=k, multiple=k)
        failure = _nagell_lutz_failure(delta, q)
        if failure:
            return TorsionVerdict(False, reason=failure, multiple=k)
        q = add(curve, q, point)
    return TorsionVerdict(False, reason=NO_SMALL_ORDER, multiple=TORSION_ORDER_BOUND)


def _square_divisor_roots(n: int):
    """All y > 0 with y^2 | n."""
    choices = [[p**e for e in range(k // 2 + 1)] for p, k in factorint(abs(n)).items()]
    for combo in product(*choices):
        yield math.prod(combo)


def torsion_subgroup(curve: WeierstrassCurve) -> list[CurvePoint]:
    """Rational torsion points (O first), from Nagell-Lutz candidates."""
    if not curve.is_integral:
        raise DomainError("curve coefficients must be integers; clear denominators first")
    cubic = curve.rhs_poly()
    found = {O}
    for y in [0, *_square_divisor_roots(int(curve.discriminant))]:
        for x in rational_roots(cubic - y * y):
            if x.denominator != 1:
                continue
            for q in {CurvePoint(x, y), CurvePoint(x, -y)}:
                if nagell_lutz_test(curve, q).torsion:
                    found.add(q)
    for p in found:
        for q in found:
            if add(curve, p, q) not in found:
                raise AssertionError("torsion set not closed under addition")
    return sorted(found, key=CurvePoint.sort_key)


# -- division polynomials ----------------------------------------------------
# Elements of Q[x, y]/(y^2 - f) are stored as pairs (A, B) meaning A + y*B.


def _ring_mul(f, u, v):
    (a1, b1), (a2, b2) = u, v
    return (a1 * a2 + f * b1 * b2, a1 * b2 + a2 * b1)


def _ring_sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def _div_by_2y(f, u):
    # (A + yB) / (2y) = B/2 + y * A / (2f)
    a, b = u
    return (b / 2, a / (2 * f))


def _psi_table(curve: WeierstrassCurve, n: int) -> dict:
    a, b = curve.a, curve.b
    x = UniPoly.gen()
    f = curve.rhs_poly()
    zero, one = UniPoly(), UniPoly([1])
    psi = {
        0: (zero, zero),
        1: (one, zero),
        2: (zero, UniPoly([2])),
        3: (3 * x**4 + 6 * a * x**2 + 12 * b * x - a * a, zero),
        4: (zero, 4 * (x**6 + 5 * a * x**4 + 20 * b * x**3 - 5 * a * a * x**2
                       - 4 * a * b * x - 8 * b * b - a**3)),
    }

    def mul(*factors):
        out = (one, zero)
        for g in factors:
            out = _ring_mul(f, out, g)
        return out

    for k in range(5, n + 2):
        m = k // 2
        if k % 2:
            psi[k] = _ring_sub(
                mul(psi[m + 2], psi[m], psi[m], psi[m]),
                mul(psi[m - 1], psi[m + 1], psi[m + 1], psi[m + 1]),
            )
        else:
            bracket = _ring_sub(
                mul(psi[m + 2], psi[m - 1], psi[m - 1]),
                mul(psi[m - 2], psi[m + 1], psi[m + 1]),
            )
            psi[k] = _div_by_2y(f, mul(psi[m], bracket))
    return psi


def _y_free(f, u) -> UniPoly:
    a, b = u
    if b:
        raise AssertionError("expected an element free of y")
    return a


def division_polynomial(curve: WeierstrassCurve, n: int) -> tuple[UniPoly, UniPoly]:
    """(phi_n, psi_n^2) with x([n]P) = phi_n(x) / psi_n^2(x)."""
    if not 1 <= n <= MAX_DIVISION_INDEX:
        raise DomainError(f"n must be between 1 and {MAX_DIVISION_INDEX}")
    f = curve.rhs_poly()
    psi = _psi_table(curve, n)
    psi_sq = _y_free(f, _ring_mul(f, psi[n], psi[n]))
    neighbours = _y_free(f, _ring_mul(f, psi[n + 1], psi[n - 1]))
    phi = UniPoly.gen() * psi_sq - neighbours
    return phi, psi_sq


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def division_preimages(curve: WeierstrassCurve, point: CurvePoint, n: int) -> list[CurvePoint]:
    """Every rational Q with [n]Q = point."""
    if not 1 <= n <= MAX_DIVISION_INDEX:
        raise DomainError(f"n must be between 1 and {MAX_DIVISION_INDEX}")
    curve.require(point)
    if n == 1:
        return [point]
    phi, psi_sq = division_polynomial(curve, n)
    if point.is_identity:
        candidates = [O]
        equation = psi_sq
    else:
        candidates = []
        equation = phi - point.x * psi_sq
    for x in rational_roots(equation):
        y = _rational_sqrt(curve.rhs(x))
        if y is None:
            continue
        candidates += [CurvePoint(x, y), CurvePoint(x, -y)] if y else [CurvePoint(x, y)]
    found = {q for q in candidates if multiply(curve, n, q) == point}
    return sorted(found, key=CurvePoint.sort_key)
