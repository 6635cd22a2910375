"""Exact rationals and dense univariate polynomials.

``Rational`` is :class:`fractions.Fraction`, which already keeps every value
in lowest terms with a positive denominator.  ``UniPoly`` coefficients are
either rationals or ``UniPoly`` objects in a different variable, so that
``x^2 - t`` can be handled as a polynomial in ``x`` over ``Q[t]``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce

from sympy import divisors

from .errors import DomainError, ParseError

Rational = Fraction

_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"`` into a Fraction; floats are rejected."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ParseError(f"not an exact rational: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def _as_coeff(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if isinstance(c, UniPoly):
        return c
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of var^i."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var: str = "x"):
        cs = [_as_coeff(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def monomial(cls, degree: int, coeff=1, var: str = "x") -> UniPoly:
        return cls([0] * degree + [coeff], var)

    @classmethod
    def gen(cls, var: str = "x") -> UniPoly:
        return cls([0, 1], var)

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.leading == 1

    def __bool__(self):
        return bool(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other):
        # When two variables meet, the alphabetically later one is outer
        # (x over t), so t*x is a polynomial in x with coefficient t.
        if isinstance(other, UniPoly):
            if other.var == self.var:
                return other
            if other.var > self.var:
                return None
            return UniPoly([other], self.var)
        if isinstance(other, (int, Fraction)):
            return UniPoly([other], self.var)
        return None

    def _outer(self, other) -> bool:
        # Python skips reflected methods between operands of the same type.
        return isinstance(other, UniPoly) and other.var > self.var

    def __eq__(self, other):
        if self._outer(other):
            return other == self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeff(0))
        return hash((self.var, self.coeffs))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if self._outer(other):
            return other + self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly([self.coeff(i) + o.coeff(i) for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        if self._outer(other):
            return -other + self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if self._outer(other):
            return other * self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return UniPoly((), self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = UniPoly([1], self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: UniPoly):
        """Euclidean division; the divisor's leading coefficient must divide exactly."""
        o = self._coerce(other)
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = o.degree
        lc = o.leading
        if len(rem) - 1 < dq:
            return UniPoly((), self.var), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c / lc
            quot[k - dq] = q
            for j, b in enumerate(o.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - q * b
        return UniPoly(quot, self.var), UniPoly(rem[:dq], self.var)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __truediv__(self, other):
        if isinstance(other, UniPoly) and other.var == self.var:
            q, r = self.divmod(other)
            if r:
                raise DomainError(f"{self} is not divisible by {other}")
            return q
        return UniPoly([c / other for c in self.coeffs], self.var)

    # -- calculus and evaluation -------------------------------------------

    def derivative(self) -> UniPoly:
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> UniPoly:
        if not self.coeffs:
            return self
        return self / self.leading

    def map_coeffs(self, fn) -> UniPoly:
        return UniPoly([fn(c) for c in self.coeffs], self.var)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if isinstance(c, UniPoly) and not c.is_constant():
                sign = "-" if c.leading < 0 else "+"
                c = -c if sign == "-" else c
                cs = f"({c})" if sum(1 for a in c.coeffs if a) > 1 else str(c)
            else:
                c = c.coeff(0) if isinstance(c, UniPoly) else c
                sign = "-" if c < 0 else "+"
                c = abs(c)
                cs = "" if (c == 1 and mono) else str(c)
            body = cs + ("*" if cs and mono else "") + mono
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"UniPoly({list(map(str, self.coeffs))}, var={self.var!r})"


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd over a field of coefficients (zero if both are zero)."""
    a, b = p, q
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def sylvester_matrix(p: UniPoly, q: UniPoly) -> list[list]:
    m, n = p.degree, q.degree
    size = m + n
    zero = Fraction(0)
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - n - 1 - i))
    return rows


def determinant(matrix: list[list]):
    """Fraction-free Bareiss elimination; entries need only exact division."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def resultant(p: UniPoly, q: UniPoly):
    """Resultant as the determinant of the Sylvester matrix."""
    if not p and not q:
        raise DomainError("resultant of two zero polynomials is undefined")
    if not p or not q:
        return Fraction(0)
    return determinant(sylvester_matrix(p, q))


def discriminant(p: UniPoly):
    """disc(p) = (-1)^(n(n-1)/2) * res(p, p') for monic p of degree n.

    For quadratics this agrees with b^2 - 4c, e.g. disc(x^2 - t) = 4t.
    """
    if p.degree < 1:
        raise DomainError("discriminant needs degree >= 1")
    if not p.is_monic():
        raise DomainError("discriminant is defined here for monic polynomials only")
    n = p.degree
    r = resultant(p, p.derivative())
    return -r if (n * (n - 1) // 2) % 2 else r


def integer_coefficients(p: UniPoly) -> list[int]:
    """Primitive integer multiple of a rational polynomial (ascending order)."""
    dens = [c.denominator for c in p.coeffs]
    lcm = reduce(math.lcm, dens, 1)
    ints = [int(c * lcm) for c in p.coeffs]
    g = reduce(math.gcd, ints, 0)
    return [c // g for c in ints] if g else ints


def _homogeneous_eval(ints: list[int], r: int, s: int) -> int:
    # s^n * p(r/s) for integer coefficients
    n = len(ints) - 1
    acc = 0
    for i, c in enumerate(ints):
        acc += c * r**i * s ** (n - i)
    return acc


def rational_roots(p: UniPoly) -> list[Fraction]:
    """All rational roots of ``p``, sorted ascending, via the rational root theorem."""
    if not p:
        raise DomainError("indeterminate roots: zero polynomial")
    ints = integer_coefficients(p)
    roots = []
    k = 0
    while ints[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
        ints = ints[k:]
    if len(ints) == 1:
        return roots
    a0, an = ints[0], ints[-1]
    at_one = sum(ints)
    at_minus_one = sum(c if i % 2 == 0 else -c for i, c in enumerate(ints))
    # Cauchy bound on root magnitude
    bound = 1 + max(Fraction(abs(c), abs(an)) for c in ints[:-1])
    bnum, bden = bound.numerator, bound.denominator
    numerators = list(divisors(abs(a0), generator=True))
    for s in divisors(abs(an), generator=True):
        for r in numerators:
            if r * bden > bnum * s or math.gcd(r, s) != 1:
                continue
            for num in (r, -r):
                if num != s and at_one % (s - num):
                    continue
                if num != -s and at_minus_one % (s + num):
                    continue
                if _homogeneous_eval(ints, num, s) == 0:
                    roots.append(Fraction(num, s))
    return sorted(roots)
