"""Polynomial equations: parsing, canonical printing, point checks.

Grammar (whitespace is ignored between tokens)::

    equation := expr ( "=" expr )?
    expr     := term ( ("+" | "-") term )*
    term     := unary ( "*" unary )*
    unary    := "-" unary | "+" unary | power
    power    := atom ( "^" INT )?
    atom     := NUMBER | NAME | "(" expr ")"
    NUMBER   := INT ( "/" INT )?
    NAME     := [A-Za-z_][A-Za-z0-9_]*

Juxtaposition such as ``2x`` is rejected; write ``2*x``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ParseError
from .exact import UniPoly

MAX_SEARCH_VARIABLES = 4

Monomial = tuple  # sorted tuple of (name, power) pairs, powers > 0


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    powers = dict(a)
    for name, e in b:
        powers[name] = powers.get(name, 0) + e
    return tuple(sorted(powers.items()))


class MultiPoly:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(sorted((n, e) for n, e in mono if e))] = c
        self.terms = clean

    @classmethod
    def constant(cls, c) -> MultiPoly:
        return cls({(): c})

    @classmethod
    def variable(cls, name: str) -> MultiPoly:
        return cls({((name, 1),): 1})

    @property
    def variables(self) -> list[str]:
        return sorted({n for mono in self.terms for n, _ in mono})

    @property
    def degree(self) -> int:
        return max((sum(e for _, e in mono) for mono in self.terms), default=-1)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MultiPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def evaluate(self, assignment) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            v = c
            for name, e in mono:
                v *= Fraction(assignment[name]) ** e
            total += v
        return total

    def coefficient(self, **powers) -> Fraction:
        mono = tuple(sorted((n, e) for n, e in powers.items() if e))
        return self.terms.get(mono, Fraction(0))

    def to_unipoly(self, var: str, coeff_var: str | None = None) -> UniPoly:
        """View as a polynomial in ``var``; other variables must be ``coeff_var`` only."""
        others = set(self.variables) - {var}
        if coeff_var is None and others:
            raise DomainError(f"unexpected variables {sorted(others)} in polynomial in {var}")
        if coeff_var is not None and others - {coeff_var}:
            raise DomainError(f"unexpected variables {sorted(others - {coeff_var})}")
        buckets: dict[int, dict[int, Fraction]] = {}
        for mono, c in self.terms.items():
            d = dict(mono)
            buckets.setdefault(d.get(var, 0), {})[d.get(coeff_var, 0)] = c
        if not buckets:
            return UniPoly((), var)
        top = max(buckets)
        coeffs = []
        for i in range(top + 1):
            inner = buckets.get(i, {})
            if coeff_var is None:
                coeffs.append(inner.get(0, Fraction(0)))
            else:
                k = max(inner, default=0)
                coeffs.append(UniPoly([inner.get(j, 0) for j in range(k + 1)], coeff_var))
        return UniPoly(coeffs, var)

    def _sort_key(self, mono: Monomial):
        # graded lexicographic by variable name: higher total degree first,
        # then larger power of the alphabetically first variable first
        names = self.variables
        d = dict(mono)
        return (-sum(d.values()), tuple(-d.get(n, 0) for n in names))

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for i, mono in enumerate(sorted(self.terms, key=self._sort_key)):
            c = self.terms[mono]
            factors = [n if e == 1 else f"{n}^{e}" for n, e in mono]
            mag = abs(c)
            if factors and mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if i == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


@dataclass(frozen=True)
class Equation:
    """``lhs = 0`` with the variables listed alphabetically."""

    lhs: MultiPoly
    variables: tuple[str, ...]

    @classmethod
    def from_poly(cls, lhs: MultiPoly) -> Equation:
        return cls(lhs, tuple(lhs.variables))

    @property
    def degree(self) -> int:
        return self.lhs.degree

    def __str__(self):
        return f"{self.lhs} = 0"


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()=])|(?P<bad>\S))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "bad":
            raise ParseError(f"syntax error: unexpected character {m.group(kind)!r}", start)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, what="syntax error"):
        kind, value, pos = self.tok
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"{what}: unexpected {found}", pos)

    def expect_op(self, op):
        if self.tok[0] != "op" or self.tok[1] != op:
            self.fail(f"syntax error: expected {op!r}")
        self.advance()

    def equation(self) -> MultiPoly:
        left = self.expr()
        if self.tok[:2] == ("op", "="):
            self.advance()
            right = self.expr()
            left = left - right
        if self.tok[0] != "end":
            self.fail()
        return left

    def expr(self) -> MultiPoly:
        acc = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.advance()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MultiPoly:
        acc = self.unary()
        while self.tok[:2] == ("op", "*"):
            self.advance()
            acc = acc * self.unary()
        return acc

    def unary(self) -> MultiPoly:
        if self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.advance()[1]
            inner = self.unary()
            return -inner if op == "-" else inner
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.tok[:2] == ("op", "^"):
            self.advance()
            kind, value, pos = self.tok
            if kind != "num" or "/" in value:
                self.fail("syntax error: exponent must be a nonnegative integer literal")
            self.advance()
            base = base ** int(value)
        return base

    def atom(self) -> MultiPoly:
        kind, value, pos = self.tok
        if kind == "num":
            self.advance()
            num, _, den = value.partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", pos)
            result = MultiPoly.constant(Fraction(int(num), int(den) if den else 1))
        elif kind == "name":
            self.advance()
            result = MultiPoly.variable(value)
        elif kind == "op" and value == "(":
            self.advance()
            result = self.expr()
            self.expect_op(")")
        else:
            self.fail()
        if self.tok[0] in ("num", "name") or self.tok[:2] == ("op", "("):
            self.fail("syntax error: implicit multiplication is not allowed")
        return result


def parse_polynomial(text: str) -> MultiPoly:
    """Parse an expression without '='."""
    if not text.strip():
        raise ParseError("empty input", 0)
    p = _Parser(text)
    result = p.expr()
    if p.tok[0] != "end":
        p.fail()
    return result


def parse_equation(text: str) -> Equation:
    """Parse ``"lhs = rhs"`` (or a bare expression meaning ``expr = 0``)."""
    if not text.strip():
        raise ParseError("empty input", 0)
    return Equation.from_poly(_Parser(text).equation())


def _check_bindings(eq: Equation, assignment) -> None:
    for name in eq.variables:
        if name not in assignment:
            raise DomainError(f"missing binding for variable {name!r}")


def is_point(eq: Equation, assignment) -> bool:
    """True iff the rational tuple satisfies the equation exactly."""
    _check_bindings(eq, assignment)
    return eq.lhs.evaluate(assignment) == 0


def search_integer_points(eq: Equation, bound: int) -> list[tuple[int, ...]]:
    """Integer solutions with every coordinate in [-bound, bound], in lex order."""
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    n = len(eq.variables)
    if n > MAX_SEARCH_VARIABLES:
        raise DomainError(
            f"{n} variables exceeds the brute-force limit of {MAX_SEARCH_VARIABLES}; "
            "fix some variables first"
        )
    # integer-coefficient terms make the inner loop pure int arithmetic
    den = math.lcm(*(c.denominator for c in eq.lhs.terms.values()))
    index = {name: i for i, name in enumerate(eq.variables)}
    terms = [
        (int(c * den), [(index[name], e) for name, e in mono])
        for mono, c in eq.lhs.terms.items()
    ]
    rng = range(-bound, bound + 1)
    found = []
    for point in itertools.product(rng, repeat=n):
        total = 0
        for c, mono in terms:
            v = c
            for i, e in mono:
                v *= point[i] ** e
            total += v
        if total == 0:
            found.append(point)
    return found
