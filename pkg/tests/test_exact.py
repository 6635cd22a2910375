import math
import random
from fractions import Fraction

import pytest
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from diophantine.errors import DomainError, ParseError
from diophantine.exact import (
    UniPoly,
    discriminant,
    integer_coefficients,
    parse_rational,
    poly_gcd,
    rational_roots,
    resultant,
)

x = UniPoly.gen("x")
t = UniPoly.gen("t")

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)


def _divisors_by_trial(n):
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def brute_force_roots(p: UniPoly):
    """Every rational-root-theorem candidate, evaluated without filtering."""
    ints = integer_coefficients(p)
    found = set()
    if ints[0] == 0:
        found.add(Fraction(0))
    while ints[0] == 0:
        ints = ints[1:]
    if len(ints) == 1:
        return sorted(found)
    q = UniPoly(ints)
    for r in _divisors_by_trial(ints[0]):
        for s in _divisors_by_trial(ints[-1]):
            for cand in (Fraction(r, s), Fraction(-r, s)):
                if q(cand) == 0:
                    found.add(cand)
    return sorted(found)


def _root_product_resultant(p: UniPoly, q: UniPoly) -> float:
    """lc(p)^deg(q) times the product of q over the complex roots of p."""
    roots = np.roots([float(c) for c in reversed(p.coeffs)])
    qf = [float(c) for c in reversed(q.coeffs)]
    value = float(p.leading) ** q.degree * np.prod([np.polyval(qf, r) for r in roots])
    return value.real


class TestRational:
    def test_parse(self):
        assert parse_rational("-99/101") == Fraction(-99, 101)
        assert parse_rational("12") == 12
        assert parse_rational("4/6") == Fraction(2, 3)

    @pytest.mark.parametrize("bad", ["1.5", "x", "1/0", "", "1//2"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ParseError):
            parse_rational(bad)

    @given(rationals, rationals, rationals)
    def test_field_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * (1 / a) == 1
        for q in (a + b, a * b):
            assert math.gcd(q.numerator, q.denominator) == 1 and q.denominator >= 1


class TestUniPoly:
    def test_trims_zeros(self):
        p = UniPoly([1, 2, 0, 0])
        assert p.degree == 1 and p.coeffs == (1, 2)
        assert UniPoly([0, 0]).degree == -1

    def test_divmod(self):
        q, r = (x**3 - 1).divmod(x - 1)
        assert q == x**2 + x + 1 and not r

    def test_gcd(self):
        assert poly_gcd((x - 1) ** 2 * (x + 2), (x - 1) * (x + 3)) == x - 1

    def test_nested_coefficients(self):
        p = x**2 - t
        assert p.coeff(0) == -t
        assert str(p) == "x^2 - t"

    def test_str(self):
        assert str(3 * x**2 - x + Fraction(1, 2)) == "3*x^2 - x + 1/2"


class TestRationalRoots:
    def test_examples(self):
        assert rational_roots(x**2 - 1) == [-1, 1]
        assert rational_roots(x**4 - 8 * x**3 - 8 * x - 8) == []
        assert rational_roots(101 * x**2 + 200 * x + 99) == [-1, Fraction(-99, 101)]

    def test_circle_quadratic_from_slope(self):
        m = Fraction(10)
        p = (1 + m * m) * x**2 + 2 * m * m * x + (m * m - 1)
        assert rational_roots(p) == [-1, Fraction(-99, 101)]

    def test_zero_polynomial(self):
        with pytest.raises(DomainError, match="indeterminate roots"):
            rational_roots(UniPoly())

    def test_repeated_and_zero_roots(self):
        p = x**3 * (2 * x - 3) ** 2 * (x + 5)
        assert rational_roots(p) == [-5, 0, Fraction(3, 2)]

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(-12, 12), min_size=2, max_size=6))
    def test_matches_brute_force(self, coeffs):
        p = UniPoly(coeffs)
        if p.degree < 1:
            return
        roots = rational_roots(p)
        assert all(p(r) == 0 for r in roots)
        assert roots == brute_force_roots(p)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6)),
                    min_size=1, max_size=4))
    def test_planted_roots_found(self, planted):
        p = UniPoly([1])
        for r in planted:
            p = p * (x - r)
        assert rational_roots(p * (x**2 + 1)) == sorted(set(planted))


class TestResultantDiscriminant:
    def test_resultant_examples(self):
        assert resultant(x - 1, x + 1) == 2
        assert resultant(x**2 + 1, 2 * x) == 4
        assert resultant(x, x) == 0

    def test_resultant_both_zero(self):
        with pytest.raises(DomainError):
            resultant(UniPoly(), UniPoly())

    def test_discriminant_examples(self):
        assert discriminant(x**2 - t) == 4 * t
        assert discriminant(x**2 + 1) == -4
        assert discriminant(x**2 - x + 2) == -7

    def test_discriminant_over_qt_cubic(self):
        # x^3 + t x + 1: -4t^3 - 27
        assert discriminant(x**3 + t * x + 1) == -4 * t**3 - 27

    def test_non_monic_rejected(self):
        with pytest.raises(DomainError):
            discriminant(2 * x**2 + 1)

    def test_x2_plus_1_by_roots(self):
        # res(x^2+1, 2x) = product of 2x over the roots +-i = (2i)(-2i) = 4
        assert resultant(x**2 + 1, x**2 + 1) == 0
        assert resultant(x**2 + 1, (x**2 + 1).derivative()) == 4

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(-6, 6), min_size=2, max_size=5),
           st.lists(st.integers(-6, 6), min_size=2, max_size=5))
    def test_resultant_matches_root_product(self, a, b):
        p, q = UniPoly(a), UniPoly(b)
        if p.degree < 1 or q.degree < 1:
            return
        expected = _root_product_resultant(p, q)
        got = float(resultant(p, q))
        assert abs(got - expected) <= 1e-6 * max(1.0, abs(expected))

    def test_discriminant_zero_iff_repeated_factor(self):
        rng = random.Random(1729)
        for _ in range(150):
            deg = rng.randint(1, 5)
            p = UniPoly([rng.randint(-4, 4) for _ in range(deg)] + [1])
            if rng.random() < 0.4:
                r = rng.randint(-3, 3)
                p = (x - r) ** 2 * UniPoly(p.coeffs[: max(1, deg - 1)] + (1,))
            d = discriminant(p)
            g = poly_gcd(p, p.derivative())
            assert (d == 0) == (g.degree > 0)
            if not d:
                continue  # clustered roots make the float oracle unreliable
            roots = np.roots([float(c) for c in reversed(p.coeffs)])
            expected = 1.0
            for i in range(len(roots)):
                for j in range(i + 1, len(roots)):
                    expected *= (roots[i] - roots[j]) ** 2
            assert abs(float(d) - expected.real) <= 1e-4 * max(1.0, abs(expected))
