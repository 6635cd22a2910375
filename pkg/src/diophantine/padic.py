"""Capped-precision p-adic numbers, logarithms, iterated integrals, Strassmann.

Precision model: a PadicNumber is known modulo p^N (absolute precision N).
Values may have negative valuation; they are stored as m / p^s with
0 <= m < p^(N+s) and s >= 0 minimal.

Iterated integrals run from the basepoint 0 on P^1 minus {0, 1, oo} with
the letters

    0 -> dt/t        1 -> dt/(1-t)

and the rightmost letter is integrated first, so the word "01" is Li_2 and
"1" is -log(1 - z).  All integration constants are 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from .errors import DomainError, ParseError


def valuation(q, p: int) -> int:
    """p-adic valuation of a nonzero int or Fraction."""
    q = Fraction(q)
    if not q:
        raise ValueError("valuation of zero is infinite")
    v = 0
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _floor_log(k: int, p: int) -> int:
    """floor(log_p k) for k >= 1, the largest possible v_p(j) for j <= k."""
    e = 0
    while k >= p:
        k //= p
        e += 1
    return e


class PadicNumber:
    __slots__ = ("p", "prec", "m", "s")

    def __init__(self, p: int, prec: int, m: int = 0, s: int = 0):
        self.p = p
        self.prec = prec
        mod = p ** (prec + s)
        m %= mod
        while s > 0 and m % p == 0:
            m //= p
            s -= 1
            mod //= p
        if s == 0 and prec <= 0:
            m = 0
        self.m = m
        self.s = s

    @classmethod
    def from_rational(cls, q, p: int, prec: int) -> PadicNumber:
        q = Fraction(q)
        if not q:
            return cls(p, prec)
        v = valuation(q, p)
        if v >= prec:
            return cls(p, prec)
        s = max(0, -v)
        scaled = q * p**s
        mod = p ** (prec + s)
        m = scaled.numerator * pow(scaled.denominator, -1, mod) % mod
        return cls(p, prec, m, s)

    # -- queries -----------------------------------------------------------

    @property
    def value(self) -> Fraction:
        """The canonical rational representative m / p^s."""
        return Fraction(self.m, self.p**self.s)

    @property
    def is_zero(self) -> bool:
        """True when the value is 0 modulo p^prec."""
        return self.m == 0

    @property
    def valuation(self) -> int:
        """Exact valuation, or the lower bound ``prec`` when zero to precision."""
        if self.m == 0:
            return self.prec
        return valuation(self.m, self.p) - self.s

    def rep_string(self) -> str:
        return str(self.value)

    def __str__(self):
        return f"{self.rep_string()} + O({self.p}^{self.prec})"

    def __repr__(self):
        return f"PadicNumber({self})"

    def __eq__(self, other):
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return (self.p, self.prec, self.m, self.s) == (other.p, other.prec, other.m, other.s)

    def __hash__(self):
        return hash((self.p, self.prec, self.m, self.s))

    def with_prec(self, prec: int) -> PadicNumber:
        """Reduce to a lower precision (raising precision is refused)."""
        if prec > self.prec:
            raise DomainError(f"cannot raise precision from {self.prec} to {prec}")
        return PadicNumber.from_rational(self.value, self.p, prec)

    def agrees_with(self, other: PadicNumber) -> bool:
        """Equal at the smaller of the two precisions."""
        n = min(self.prec, other.prec)
        return self.with_prec(n) == other.with_prec(n)

    # -- arithmetic --------------------------------------------------------

    def _other(self, other) -> PadicNumber:
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise DomainError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            # exact scalars carry unlimited precision; cap far above ours
            return PadicNumber.from_rational(other, self.p, self.prec + 64)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PadicNumber.from_rational(self.value + o.value, self.p, min(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber.from_rational(-self.value, self.p, self.prec)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        prec = min(self.prec + o.valuation, o.prec + self.valuation)
        return PadicNumber.from_rational(self.value * o.value, self.p, prec)

    __rmul__ = __mul__


def _check_prime(p: int):
    if not isprime(p):
        raise DomainError(f"{p} is not prime")


# -- logarithm ---------------------------------------------------------------


def padic_log(u: PadicNumber) -> PadicNumber:
    """log(u) = sum (-1)^(k+1) (u-1)^k / k for u = 1 mod p (mod 4 when p = 2).

    log is an isometry on 1 + pZ_p (1 + 4Z_2), so the result has the
    precision of ``u``.
    """
    p, n = u.p, u.prec
    _check_prime(p)
    need = 2 if p == 2 else 1
    x = u.value - 1
    if n < need or (x and valuation(x, p) < need):
        raise DomainError("outside the convergence disk: need u = 1 mod "
                          f"{4 if p == 2 else p}")
    if not x:
        return PadicNumber(p, n)
    stop = _series_stop(valuation(x, p), 1, p, n)
    total = Fraction(0)
    power = Fraction(1)
    for k in range(1, stop):
        power *= x
        total += power / k if k % 2 else -power / k
    return PadicNumber.from_rational(total, p, n)


# -- iterated integrals ------------------------------------------------------


class DlogWord(tuple):
    """Word over {0, 1}; letter 0 is dt/t and letter 1 is dt/(1-t)."""

    def __new__(cls, letters):
        if isinstance(letters, str):
            if not letters or set(letters) - {"0", "1"}:
                raise ParseError(f"word must be a nonempty string over 0/1, got {letters!r}")
            letters = [int(c) for c in letters]
        letters = tuple(int(c) for c in letters)
        if not letters or set(letters) - {0, 1}:
            raise DomainError("word must be a nonempty sequence over {0, 1}")
        if letters[-1] != 1:
            raise DomainError("divergent at basepoint: the innermost (last) letter must be 1")
        return super().__new__(cls, letters)

    def __str__(self):
        return "".join(map(str, self))


def _iterated_coefficients(word, count: int) -> list[Fraction]:
    """Power series coefficients c_0..c_{count-1} of the iterated integral."""
    coeffs = [Fraction(1)] + [Fraction(0)] * (count - 1)
    for letter in reversed(word):
        if letter == 1:
            integrand = list(itertools.accumulate(coeffs))
            coeffs = [Fraction(0)] + [integrand[k - 1] / k for k in range(1, count)]
        else:
            if coeffs[0]:
                raise DomainError("divergent at basepoint: dt/t applied to a nonzero constant term")
            coeffs = [Fraction(0)] + [coeffs[k] / k for k in range(1, count)]
    return coeffs


def _series_stop(w: int, depth: int, p: int, prec: int) -> int:
    """Least K with k*w - depth*floor(log_p k) >= prec for every k >= K.

    That expression lower-bounds the valuation of the k-th term when the
    coefficients lose at most ``depth`` factors of 1/k.  It increases inside
    each block [p^j, p^(j+1)), and the block minima p^j*w - depth*j increase
    once p^j*(p-1)*w >= depth, so scanning up to that block suffices.
    """
    j = 0
    while p**j * w - depth * j < prec or p**j * (p - 1) * w < depth:
        j += 1
    last_bad = 0
    for k in range(1, p**j):
        if k * w - depth * _floor_log(k, p) < prec:
            last_bad = k
    return last_bad + 1


def _perturbation_loss(w: int, depth: int, p: int) -> int:
    """Max over k >= 1 of depth*floor(log_p k) - (k-1)*w, floored at 0."""
    loss = 0
    j = 0
    while True:
        loss = max(loss, depth * j - (p**j - 1) * w)
        if j and p**j * (p - 1) * w >= depth:
            return loss
        j += 1


def _z_value(z, p: int):
    if isinstance(z, PadicNumber):
        if z.p != p:
            raise DomainError("mixing different primes")
        return z.value, z.prec
    return Fraction(z), None


def iterated_integral(word, z, prec: int, p: int | None = None) -> PadicNumber:
    """Integral of the word along [0, z] for v(z) >= 1, to absolute precision ``prec``.

    ``z`` is a PadicNumber, or an exact rational (then ``p`` is required).
    For a PadicNumber the precision is lowered if ``z`` itself is not known
    finely enough.
    """
    word = DlogWord(word)
    if isinstance(z, PadicNumber):
        p = z.p
    if p is None:
        raise DomainError("prime p required for an exact z")
    _check_prime(p)
    if p == 2:
        raise DomainError("iterated integrals require an odd prime")
    zval, zprec = _z_value(z, p)
    if not zval:
        return PadicNumber(p, prec)
    w = valuation(zval, p)
    if w < 1:
        raise DomainError("z must satisfy v(z) >= 1 (residue disk of the basepoint 0)")
    depth = len(word)
    if zprec is not None:
        # an error of p^zprec in z moves the value by at most p^(zprec - loss)
        prec = min(prec, zprec - _perturbation_loss(w, depth, p))
    stop = _series_stop(w, depth, p, prec)
    coeffs = _iterated_coefficients(word, stop)
    total = Fraction(0)
    power = Fraction(1)
    for k in range(1, stop):
        power *= zval
        if coeffs[k]:
            total += coeffs[k] * power
    return PadicNumber.from_rational(total, p, prec)


def shuffles(a, b):
    """All interleavings of two words, with multiplicity."""
    n, m = len(a), len(b)
    for positions in itertools.combinations(range(n + m), n):
        chosen = set(positions)
        ia, ib = iter(a), iter(b)
        yield tuple(next(ia) if i in chosen else next(ib) for i in range(n + m))


def shuffle_check(word_a, word_b, z, prec: int, p: int | None = None) -> bool:
    """Check I(A) * I(B) = sum over shuffles S of I(S).

    The comparison is made at the precision the product actually carries,
    which drops below ``prec`` by the negative valuation of either factor.
    """
    ia = iterated_integral(word_a, z, prec, p)
    ib = iterated_integral(word_b, z, prec, p)
    lhs = ia * ib
    rhs = None
    for w in shuffles(tuple(word_a), tuple(word_b)):
        term = iterated_integral(w, z, prec, p)
        rhs = term if rhs is None else rhs + term
    return lhs.agrees_with(rhs)


# -- Strassmann --------------------------------------------------------------


@dataclass(frozen=True)
class PadicSeries:
    """sum a_k x^k with a_0..a_M given and v(a_k) >= tail_bound for k > M.

    ``tail_bound`` None means the series is a polynomial.
    """

    p: int
    coeffs: tuple
    tail_bound: int | None = None

    @classmethod
    def from_rationals(cls, coeffs, p: int, prec: int, tail_bound=None) -> PadicSeries:
        return cls(p, tuple(PadicNumber.from_rational(c, p, prec) for c in coeffs), tail_bound)

    @property
    def precision(self) -> int:
        """Absolute precision to which values on Z_p are known."""
        n = min(c.prec for c in self.coeffs)
        return n if self.tail_bound is None else min(n, self.tail_bound)


def _bound_from_valuations(vals, tail_bound=None) -> tuple[int, int]:
    """(Strassmann index, minimal valuation) from (valuation, exact) pairs."""
    known = [v for v, exact in vals if exact]
    if not known:
        raise DomainError("series indistinguishable from zero")
    low = min(known)
    if tail_bound is not None and tail_bound <= low:
        raise DomainError("series not admissible: tail bound does not exceed the minimal valuation")
    # a coefficient that is zero only to precision P <= low might attain the
    # minimum, so it is kept in the running; this keeps the result an upper bound
    index = max(i for i, (v, exact) in enumerate(vals) if v <= low)
    return index, low


def strassmann_bound(series: PadicSeries) -> int:
    """Largest index of a minimal-valuation coefficient: bounds the zeros in Z_p."""
    vals = [(c.valuation, not c.is_zero) for c in series.coeffs]
    return _bound_from_valuations(vals, series.tail_bound)[0]


@dataclass(frozen=True)
class ZeroClass:
    """Residue class ``residue mod p^exponent`` that may contain zeros.

    ``resolved`` classes contain exactly one zero; unresolved ones contain at
    most ``bound`` zeros that could not be separated at this depth.
    """

    residue: int
    p: int
    exponent: int
    resolved: bool
    bound: int

    def __str__(self):
        tag = "" if self.resolved else f" (unresolved, <= {self.bound} zeros)"
        return f"{self.residue} mod {self.p}^{self.exponent}{tag}"


def _recenter(coeffs, p, a, j, mod):
    """Coefficients of t -> f(a + p^j t), reduced mod ``mod``."""
    n = len(coeffs)
    out = []
    scale = 1
    for i in range(n):
        s = 0
        for k in range(i, n):
            if coeffs[k]:
                s += coeffs[k] * math.comb(k, i) * pow(a, k - i, mod)
        out.append(s * scale % mod)
        scale = scale * p**j % mod
    return out


def _int_valuations(coeffs, p, e):
    vals = []
    for c in coeffs:
        if c:
            vals.append((valuation(c, p), True))
        else:
            vals.append((e, False))
    return vals


def locate_zeros(series: PadicSeries, depth: int) -> list[ZeroClass]:
    """Residue classes mod p^depth containing every zero of the series in Z_p."""
    p = series.p
    vals = [(c.valuation, not c.is_zero) for c in series.coeffs]
    _, low = _bound_from_valuations(vals, series.tail_bound)
    # scale so the minimal valuation is 0; values are then known mod p^e
    e = series.precision - low
    if depth < 1 or depth > e:
        raise DomainError(f"depth must be between 1 and the working precision {e}")
    mod = p**e
    coeffs = []
    for c in series.coeffs:
        q = c.value * Fraction(p) ** (-low)
        coeffs.append(q.numerator * pow(q.denominator, -1, mod) % mod)

    def evaluate(cs, x):
        acc = 0
        for c in reversed(cs):
            acc = (acc * x + c) % mod
        return acc

    deriv = [k * c % mod for k, c in enumerate(coeffs)][1:]
    found = []

    def class_bound(a, j):
        """Strassmann bound of f on a + p^j Z_p; None if it vanishes to precision."""
        vals = _int_valuations(_recenter(coeffs, p, a, j, mod), p, e)
        if not any(exact for _, exact in vals):
            return None
        return _bound_from_valuations(vals)[0]

    def refine(a, j, bound):
        if j == depth:
            found.append(ZeroClass(a, p, j, bound == 1, bound))
            return
        children = [(a + i * p**j, class_bound(a + i * p**j, j + 1)) for i in range(p)]
        if any(b is None for _, b in children):
            # precision exhausted before the zeros separate; keep the coarser class
            found.append(ZeroClass(a, p, j, False, bound))
            return
        for child, b in children:
            if b:
                refine(child, j + 1, b)

    top = [(r, class_bound(r, 1)) for r in range(p)]
    if any(b is None for _, b in top):
        total = _bound_from_valuations(vals, series.tail_bound)[0]
        return [ZeroClass(0, p, 0, False, total)]
    for r, b in top:
        if not b:
            continue
        if deriv and evaluate(deriv, r) % p:
            # simple root mod p: Newton converges to the unique zero in the class
            x = r
            for _ in range(depth.bit_length() + 1):
                x = (x - evaluate(coeffs, x) * pow(evaluate(deriv, x), -1, mod)) % mod
            found.append(ZeroClass(x % p**depth, p, depth, True, 1))
        else:
            refine(r, 1, b)
    return sorted(found, key=lambda zc: zc.residue)
