"""Etale criterion for Spec(A[x]/(f)) -> Spec(A) with monic f.

The map is etale exactly when disc(f) is a unit of A.  Base rings are
symbolic: Z[1/N], F_p, Q, and Q[t, 1/g].
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import sympy
from sympy import factorint, isprime

from .errors import DomainError, ParseError
from .exact import UniPoly, discriminant, poly_gcd
from .parser import parse_polynomial


@dataclass(frozen=True)
class IntegersLocalized:
    """Z[1/N]; N = 1 gives Z."""

    N: int = 1

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("N must be a positive integer")

    @property
    def inverted_primes(self) -> list[int]:
        return sorted(factorint(self.N))

    def __str__(self):
        return "Z" if self.N == 1 else f"Z[1/{self.N}]"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isprime(self.p):
            raise DomainError(f"{self.p} is not prime")

    def __str__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class Rationals:
    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PolyLocalized:
    """Q[t, 1/g]; g = 1 gives Q[t]."""

    g: UniPoly = field(default_factory=lambda: UniPoly([1], "t"))

    def __post_init__(self):
        if not self.g:
            raise DomainError("cannot invert the zero polynomial")

    def __str__(self):
        return "Q[t]" if self.g.is_constant() else f"Q[t,1/({self.g})]"


_RING_RE = re.compile(
    r"^\s*(?:(?P<q>Q)|F_(?P<p>\d+)|Z(?:\[1/(?P<n>\d+)\])?|Q\[t(?:\s*,\s*1/(?P<g>.+))?\])\s*$"
)


def parse_ring(text: str):
    """Parse ``Q``, ``F_p``, ``Z``, ``Z[1/N]``, ``Q[t]`` or ``Q[t,1/g]``."""
    m = _RING_RE.match(text)
    if not m:
        raise ParseError(f"unrecognised ring {text!r}; expected Q, F_p, Z[1/N] or Q[t,1/g]")
    if m.group("q"):
        return Rationals()
    if m.group("p"):
        return PrimeField(int(m.group("p")))
    if text.strip().startswith("Z"):
        return IntegersLocalized(int(m.group("n") or 1))
    g = m.group("g")
    if g is None:
        return PolyLocalized()
    return PolyLocalized(parse_polynomial(g).to_unipoly("t"))


# -- unit tests --------------------------------------------------------------


def _t_poly(element) -> UniPoly:
    if isinstance(element, UniPoly):
        return element
    return UniPoly([element], "t")


def _strip_factors(h: UniPoly, g: UniPoly) -> UniPoly:
    """Remove from h every irreducible factor it shares with g."""
    d = poly_gcd(h, g)
    while d.degree > 0:
        h = h / d
        d = poly_gcd(h, g)
    return h


def is_unit(ring, element) -> bool:
    if isinstance(ring, IntegersLocalized):
        q = Fraction(element)
        if not q:
            return False
        inverted = set(factorint(ring.N))
        if set(factorint(q.denominator)) - inverted:
            raise DomainError(f"{q} is not an element of {ring}")
        return set(factorint(abs(q.numerator))) <= inverted
    if isinstance(ring, PrimeField):
        q = Fraction(element)
        if q.denominator % ring.p == 0:
            raise DomainError(f"{q} is not an element of {ring}")
        return q.numerator % ring.p != 0
    if isinstance(ring, Rationals):
        return Fraction(element) != 0
    if isinstance(ring, PolyLocalized):
        h = _t_poly(element)
        if not h:
            return False
        return _strip_factors(h, ring.g).is_constant()
    raise TypeError(f"unknown ring descriptor {ring!r}")


# -- etale check -------------------------------------------------------------


@dataclass(frozen=True)
class EtaleCandidate:
    base: object
    f: UniPoly

    def __post_init__(self):
        if self.f.degree < 1 or not self.f.is_monic():
            raise DomainError("f must be monic of degree >= 1")


@dataclass(frozen=True)
class EtaleVerdict:
    etale: bool
    discriminant: object
    witness: object = None  # non-inverted prime / irreducible factor dividing disc

    def __bool__(self):
        return self.etale


def _irreducible_factor(h: UniPoly) -> UniPoly:
    t = sympy.Symbol(h.var)
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(h.coeffs)],
                      t, domain=sympy.QQ)
    _, factors = poly.factor_list()
    first = min((fac for fac, _ in factors), key=lambda fac: (fac.degree(), str(fac)))
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(first.all_coeffs())]
    return UniPoly(coeffs, h.var).monic()


def is_etale(candidate: EtaleCandidate) -> EtaleVerdict:
    """Decide whether disc(f) is a unit in the base ring, with a witness if not."""
    base, f = candidate.base, candidate.f
    if isinstance(base, PolyLocalized):
        f = f.map_coeffs(_t_poly)
        disc = _t_poly(discriminant(f))
        if is_unit(base, disc):
            return EtaleVerdict(True, disc)
        witness = _irreducible_factor(_strip_factors(disc, base.g)) if disc else None
        return EtaleVerdict(False, disc, witness)

    for c in f.coeffs:
        if isinstance(c, UniPoly) and not c.is_constant():
            raise DomainError(f"coefficient {c} does not lie in {base}")
    f = f.map_coeffs(lambda c: c.coeff(0) if isinstance(c, UniPoly) else c)
    disc = discriminant(f)
    if is_unit(base, disc):
        return EtaleVerdict(True, disc)
    if isinstance(base, IntegersLocalized) and disc:
        bad = sorted(set(factorint(abs(disc.numerator))) - set(factorint(base.N)))
        return EtaleVerdict(False, disc, bad[0])
    if isinstance(base, PrimeField):
        return EtaleVerdict(False, disc, base.p)
    return EtaleVerdict(False, disc)


# -- fibres over primes ------------------------------------------------------
# Polynomials over F_p are int lists, lowest degree first.


def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv % p
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] = (a[k + j] - c * bj) % p
    return _fp_trim(q), _fp_trim(a[: len(b) - 1])


def _fp_gcd(a, b, p):
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _fp_radical(a, p):
    """Product of the distinct monic irreducible factors of a over F_p."""
    deriv = _fp_trim([i * c % p for i, c in enumerate(a)][1:])
    if not deriv:
        # a(x) = h(x^p) = h(x)^p since c^p = c on F_p
        return _fp_radical(a[::p], p)
    g = _fp_gcd(a, deriv, p)
    if len(g) == 1:
        return a
    w = _fp_divmod(a, g, p)[0]
    r = _fp_radical(g, p)
    common = _fp_gcd(w, r, p)
    return _fp_divmod(_fp_mul(w, r, p), common, p)[0]


def _fp_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _fp_trim(out)


def _integer_coeffs(f: UniPoly) -> list[int]:
    out = []
    for c in f.coeffs:
        c = c.coeff(0) if isinstance(c, UniPoly) else c
        if c.denominator != 1:
            raise DomainError("polynomial must have integer coefficients")
        out.append(int(c))
    return out


def geometric_fiber_count(f: UniPoly, p: int) -> int:
    """Number of distinct roots of f mod p over an algebraic closure of F_p."""
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if not f.is_monic():
        raise DomainError("f must be monic")
    reduced = _fp_trim([c % p for c in _integer_coeffs(f)])
    return len(_fp_radical(reduced, p)) - 1


# -- coverings of Spec(Z) ----------------------------------------------------


@dataclass(frozen=True)
class CoverEntry:
    f: UniPoly
    N: int
    etale: bool
    discriminant: Fraction
    inverted_primes: list[int]
    ramified_primes: list[int]


@dataclass(frozen=True)
class CoverReport:
    covers: bool
    entries: list[CoverEntry]
    uncovered_primes: list[int]

    def __bool__(self):
        return self.covers


def covers_spec_z(candidates) -> CoverReport:
    """Check that the maps Spec(Z[x]/(f_i)[1/N_i]) -> Spec(Z) are etale and jointly surjective."""
    candidates = list(candidates)
    if not candidates:
        raise DomainError("need at least one map")
    entries = []
    for f, n in candidates:
        ring = IntegersLocalized(int(n))
        verdict = is_etale(EtaleCandidate(ring, f))
        disc = verdict.discriminant
        ramified = sorted(factorint(abs(disc.numerator))) if disc else []
        entries.append(CoverEntry(f, ring.N, verdict.etale, disc, ring.inverted_primes, ramified))
    common = reduce(math.gcd, (e.N for e in entries))
    uncovered = sorted(factorint(common))
    ok = all(e.etale for e in entries) and not uncovered
    return CoverReport(ok, entries, uncovered)
