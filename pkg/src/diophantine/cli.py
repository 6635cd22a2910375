"""Command-line front end: ``diophantine <subcommand> [options]``.

Exit status is 0 on success, 1 when an operation rejects its input on
mathematical grounds, and 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import conics, cubics, etale, exact, padic
from . import parser as eqparser
from .errors import DomainError, ParseError
from .exact import parse_rational


@dataclass
class CommandResult:
    command: str
    status: str  # "ok" or "error"
    payload: dict = field(default_factory=dict)
    text: str = ""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument types ----------------------------------------------------------


def _arg(fn):
    def convert(text):
        try:
            return fn(text)
        except (ParseError, DomainError, ValueError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    convert.__name__ = fn.__name__.lstrip("_")
    return convert


@_arg
def rational(text):
    return parse_rational(text)


@_arg
def point(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected x,y but got {text!r}")
    return tuple(parse_rational(s) for s in parts)


@_arg
def rational_list(text):
    return [parse_rational(s) for s in text.split(",")]


@_arg
def curve(text):
    parts = rational_list(text)
    if len(parts) != 2:
        raise ValueError(f"expected a,b but got {text!r}")
    return cubics.WeierstrassCurve(*parts)


@_arg
def slope(text):
    if text.strip().lower() in ("v", "vertical", "inf"):
        return conics.VERTICAL
    return parse_rational(text)


@_arg
def equation(text):
    """An equation, or ``@path`` to read it from a file."""
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValueError(f"cannot read equation file: {exc.strerror}") from None
    return eqparser.parse_equation(text)


@_arg
def xpoly(text):
    """Polynomial in x whose coefficients may involve t."""
    return eqparser.parse_polynomial(text).to_unipoly("x", "t").map_coeffs(
        lambda c: c.coeff(0) if c.is_constant() else c
    )


@_arg
def ring(text):
    return etale.parse_ring(text)


@_arg
def cover_map(text):
    poly_text, sep, n = text.rpartition(",")
    if not sep:
        raise ValueError(f"expected POLY,N but got {text!r}")
    return xpoly(poly_text), int(n)


@_arg
def word(text):
    return padic.DlogWord(text)


# -- payload helpers ---------------------------------------------------------


def _q(x) -> str:
    return str(Fraction(x))


def _xy(pt):
    return {"x": _q(pt[0]), "y": _q(pt[1])}


def _curve_point(pt: cubics.CurvePoint):
    return {"identity": True} if pt.is_identity else {"x": _q(pt.x), "y": _q(pt.y)}


def _padic(value: padic.PadicNumber):
    return {"rep": value.rep_string(), "p": value.p, "prec": value.prec}


def _pt_text(pt):
    return f"{pt[0]}, {pt[1]}"


# -- subcommands -------------------------------------------------------------
# name -> (library operation, argument setup, handler)

SUBCOMMANDS: dict = {}


def subcommand(name, operation, help):
    def register(handler):
        def setup(sub):
            p = sub.add_parser(name, help=help, description=help)
            handler.arguments(p)
            return p

        SUBCOMMANDS[name] = (operation, setup, handler)
        return handler

    return register


def args(*specs):
    """Attach argparse argument specs ((flags...), kwargs) to a handler."""

    def attach(handler):
        def arguments(p):
            for flags, kwargs in specs:
                p.add_argument(*flags, **kwargs)
            p.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS)

        handler.arguments = arguments
        return handler

    return attach


def opt(*flags, **kwargs):
    kwargs.setdefault("required", True)
    return flags, kwargs


@subcommand("parse", eqparser.parse_equation, "parse an equation into canonical form")
@args(opt("--eq", type=equation))
def _parse(a):
    eq = a.eq
    payload = {"lhs": str(eq.lhs), "variables": list(eq.variables), "degree": eq.degree}
    return payload, f"{eq}\nvariables: {', '.join(eq.variables)}\ndegree: {eq.degree}"


def _assignment(eq, text):
    if "=" in text:
        out = {}
        for item in text.split(","):
            name, _, value = item.partition("=")
            out[name.strip()] = parse_rational(value)
        return out
    values = [parse_rational(s) for s in text.split(",")]
    if len(values) != len(eq.variables):
        raise ParseError(f"expected {len(eq.variables)} values for {', '.join(eq.variables)}")
    return dict(zip(eq.variables, values))


@subcommand("check-point", eqparser.is_point, "test whether a rational tuple solves the equation")
@args(opt("--eq", type=equation),
      opt("--point", help="values in variable order, or name=value pairs"))
def _check_point(a):
    ok = eqparser.is_point(a.eq, _assignment(a.eq, a.point))
    return {"point": ok}, "yes" if ok else "no"


@subcommand("search", eqparser.search_integer_points, "brute-force integer solutions in a box")
@args(opt("--eq", type=equation), opt("--bound", type=int))
def _search(a):
    sols = eqparser.search_integer_points(a.eq, a.bound)
    payload = {"variables": list(a.eq.variables), "solutions": [[str(v) for v in s] for s in sols]}
    text = "\n".join("(" + ", ".join(map(str, s)) + ")" for s in sols) or "no solutions"
    return payload, text


@subcommand("conic-sweep", conics.sweep, "second intersection of a line through a conic point")
@args(opt("--eq", type=equation), opt("--base", type=point), opt("--slope", type=slope))
def _conic_sweep(a):
    pt = conics.sweep(conics.Conic.from_equation(a.eq), a.base, a.slope)
    return _xy(pt), _pt_text(pt)


@subcommand("slope", conics.slope_between, "slope of the line joining two conic points")
@args(opt("--eq", type=equation), opt("--base", type=point), opt("--other", type=point))
def _slope(a):
    m = conics.slope_between(conics.Conic.from_equation(a.eq), a.base, a.other)
    return {"slope": str(m)}, str(m)


@subcommand("triples", conics.pythagorean_triple, "primitive Pythagorean triple from a slope")
@args(opt("--slope", type=rational))
def _triples(a):
    t = conics.pythagorean_triple(a.slope)
    return {"triple": [str(v) for v in t]}, " ".join(map(str, t))


@subcommand("cubic-tangent", cubics.tangent_step, "tangent step on x^3 + y^3 = c")
@args(opt("--c", type=rational), opt("--point", type=point))
def _cubic_tangent(a):
    pt = cubics.tangent_step(cubics.DiagonalCubic(a.c), a.point)
    return _xy(pt), _pt_text(pt)


@subcommand("cubic-secant", cubics.secant_step, "secant step on x^3 + y^3 = c")
@args(opt("--c", type=rational), opt("--point", type=point), opt("--other", type=point))
def _cubic_secant(a):
    pt = cubics.secant_step(cubics.DiagonalCubic(a.c), a.point, a.other)
    return _xy(pt), _pt_text(pt)


@subcommand("cubic-iterate", cubics.tangent_iterates,
            "repeated tangent steps with Weierstrass images and torsion verdicts")
@args(opt("--c", type=rational), opt("--point", type=point), opt("--steps", type=int))
def _cubic_iterate(a):
    cubic = cubics.DiagonalCubic(a.c)
    rows, lines = [], []
    for i, pt in enumerate(cubics.tangent_iterates(cubic, a.point, a.steps), 1):
        row = _xy(pt)
        line = f"{i}: ({_pt_text(pt)})"
        try:
            w, image = cubics.to_weierstrass(cubic, pt)
        except DomainError:
            row["weierstrass"] = None
            row["verdict"] = None
        else:
            row["weierstrass"] = {"u": _q(image.x), "v": _q(image.y)}
            verdict = cubics.nagell_lutz_test(w, image) if w.is_integral else None
            row["verdict"] = str(verdict) if verdict else None
            line += f"  -> (u, v) = ({image.x}, {image.y})"
            if verdict:
                line += f"  {verdict}"
        rows.append(row)
        lines.append(line)
    return {"iterates": rows}, "\n".join(lines)


@subcommand("weierstrass-map", cubics.to_weierstrass, "map a point of x^3 + y^3 = c to v^2 = u^3 - 432c^2")
@args(opt("--c", type=rational), opt("--point", type=point))
def _weierstrass_map(a):
    w, image = cubics.to_weierstrass(cubics.DiagonalCubic(a.c), a.point)
    payload = {"a": _q(w.a), "b": _q(w.b), "u": _q(image.x), "v": _q(image.y)}
    return payload, f"{w}\n({image.x}, {image.y})"


@subcommand("ec-add", cubics.add, "add two points on y^2 = x^3 + ax + b")
@args(opt("--curve", type=curve), opt("--point", type=point), opt("--other", type=point))
def _ec_add(a):
    p = a.curve.require(cubics.CurvePoint(*a.point))
    q = a.curve.require(cubics.CurvePoint(*a.other))
    r = cubics.add(a.curve, p, q)
    return _curve_point(r), str(r)


@subcommand("ec-mul", cubics.multiply, "scalar multiple [n]P")
@args(opt("--curve", type=curve), opt("--point", type=point), opt("--n", type=int))
def _ec_mul(a):
    p = a.curve.require(cubics.CurvePoint(*a.point))
    r = cubics.multiply(a.curve, a.n, p)
    return _curve_point(r), str(r)


@subcommand("torsion-test", cubics.nagell_lutz_test, "Nagell-Lutz torsion certificate")
@args(opt("--curve", type=curve), opt("--point", type=point))
def _torsion_test(a):
    v = cubics.nagell_lutz_test(a.curve, cubics.CurvePoint(*a.point))
    payload = {"torsion": v.torsion, "order": v.order, "reason": v.reason or None,
               "multiple": v.multiple}
    return payload, str(v)


@subcommand("torsion-subgroup", cubics.torsion_subgroup, "rational torsion points")
@args(opt("--curve", type=curve))
def _torsion_subgroup(a):
    pts = cubics.torsion_subgroup(a.curve)
    return ({"order": len(pts), "points": [_curve_point(p) for p in pts]},
            f"order {len(pts)}: " + ", ".join(map(str, pts)))


@subcommand("divide", cubics.division_preimages, "rational points Q with [n]Q = P")
@args(opt("--curve", type=curve), opt("--point", type=point), opt("--n", type=int))
def _divide(a):
    pts = cubics.division_preimages(a.curve, cubics.CurvePoint(*a.point), a.n)
    return ({"preimages": [_curve_point(p) for p in pts]},
            ", ".join(map(str, pts)) or "no rational preimages")


@subcommand("divpoly", cubics.division_polynomial, "phi_n and psi_n^2 with x([n]P) = phi_n/psi_n^2")
@args(opt("--curve", type=curve), opt("--n", type=int))
def _divpoly(a):
    phi, psi_sq = cubics.division_polynomial(a.curve, a.n)
    return {"phi": str(phi), "psi_squared": str(psi_sq)}, f"phi = {phi}\npsi^2 = {psi_sq}"


@subcommand("roots", exact.rational_roots, "rational roots of a polynomial in x")
@args(opt("--poly", type=xpoly))
def _roots(a):
    rs = exact.rational_roots(a.poly)
    return {"roots": [_q(r) for r in rs]}, ", ".join(map(str, rs)) or "no rational roots"


@subcommand("discriminant", exact.discriminant, "discriminant of a monic polynomial in x")
@args(opt("--poly", type=xpoly))
def _discriminant(a):
    d = exact.discriminant(a.poly)
    return {"discriminant": str(d)}, str(d)


@subcommand("resultant", exact.resultant, "resultant of two polynomials in x")
@args(opt("--poly", type=xpoly), opt("--other", type=xpoly))
def _resultant(a):
    r = exact.resultant(a.poly, a.other)
    return {"resultant": str(r)}, str(r)


@subcommand("unit", etale.is_unit, "is an element a unit of the ring")
@args(opt("--ring", type=ring), opt("--element"))
def _unit(a):
    if isinstance(a.ring, etale.PolyLocalized):
        element = eqparser.parse_polynomial(a.element).to_unipoly("t")
    else:
        element = parse_rational(a.element)
    ok = etale.is_unit(a.ring, element)
    return {"unit": ok}, "unit" if ok else "not a unit"


@subcommand("etale-check", etale.is_etale, "is Spec(A[x]/(f)) -> Spec(A) etale")
@args(opt("--ring", type=ring), opt("--poly", type=xpoly))
def _etale_check(a):
    v = etale.is_etale(etale.EtaleCandidate(a.ring, a.poly))
    witness = None if v.witness is None else str(v.witness)
    payload = {"etale": v.etale, "discriminant": str(v.discriminant), "witness": witness}
    text = f"{'etale' if v.etale else 'not etale'}; discriminant {v.discriminant}"
    if witness:
        text += f"; divisible by non-unit {witness}"
    return payload, text


@subcommand("fiber", etale.geometric_fiber_count, "number of geometric points of the fibre over p")
@args(opt("--poly", type=xpoly), opt("--prime", type=int))
def _fiber(a):
    n = etale.geometric_fiber_count(a.poly, a.prime)
    return ({"count": n, "degree": a.poly.degree},
            f"{n} geometric point(s) over F_{a.prime} (degree {a.poly.degree})")


@subcommand("cover-check", etale.covers_spec_z, "do the given etale maps cover Spec(Z)")
@args(opt("--map", type=cover_map, action="append", dest="maps", help="POLY,N (repeatable)"))
def _cover_check(a):
    report = etale.covers_spec_z(a.maps)
    maps = [{
        "poly": str(e.f), "N": e.N, "etale": e.etale, "discriminant": _q(e.discriminant),
        "inverted_primes": e.inverted_primes, "ramified_primes": e.ramified_primes,
    } for e in report.entries]
    lines = [
        f"{e.f} over Z[1/{e.N}]: {'etale' if e.etale else 'NOT etale'}, "
        f"inverted {e.inverted_primes}, ramified {e.ramified_primes}"
        for e in report.entries
    ]
    if report.uncovered_primes:
        lines.append(f"uncovered primes: {report.uncovered_primes}")
    lines.append("covers Spec(Z)" if report.covers else "does not cover Spec(Z)")
    payload = {"covers": report.covers, "uncovered_primes": report.uncovered_primes, "maps": maps}
    return payload, "\n".join(lines)


@subcommand("padic-log", padic.padic_log, "p-adic logarithm")
@args(opt("--p", type=int), opt("--prec", type=int), opt("--u", type=rational))
def _padic_log(a):
    v = padic.padic_log(padic.PadicNumber.from_rational(a.u, a.p, a.prec))
    return {"log": _padic(v)}, str(v)


@subcommand("iterint", padic.iterated_integral,
            "iterated integral from 0 to z; letters 0 = dt/t, 1 = dt/(1-t), leftmost outermost")
@args(opt("--p", type=int), opt("--prec", type=int), opt("--word", type=word),
      opt("--z", type=rational))
def _iterint(a):
    v = padic.iterated_integral(a.word, a.z, a.prec, p=a.p)
    return {"value": _padic(v)}, str(v)


@subcommand("shuffle", padic.shuffle_check, "check the shuffle product identity")
@args(opt("--p", type=int), opt("--prec", type=int), opt("--word", type=word),
      opt("--other", type=word), opt("--z", type=rational))
def _shuffle(a):
    ok = padic.shuffle_check(a.word, a.other, a.z, a.prec, p=a.p)
    return {"holds": ok}, "shuffle identity holds" if ok else "shuffle identity FAILS"


def _series(a):
    return padic.PadicSeries.from_rationals(a.coeffs, a.p, a.prec, a.tail_bound)


_SERIES_ARGS = (
    opt("--p", type=int),
    opt("--coeffs", type=rational_list, help="a0,a1,...,aM"),
    opt("--prec", type=int, required=False, default=20),
    opt("--tail-bound", type=int, required=False, default=None,
        help="valuation lower bound beyond the last coefficient (omit for a polynomial)"),
)


@subcommand("strassmann", padic.strassmann_bound, "Strassmann bound on the zeros in Z_p")
@args(*_SERIES_ARGS)
def _strassmann(a):
    n = padic.strassmann_bound(_series(a))
    return {"bound": n}, f"at most {n} zero(s) in Z_{a.p}"


@subcommand("zeros", padic.locate_zeros, "residue classes containing the zeros in Z_p")
@args(*_SERIES_ARGS, opt("--depth", type=int))
def _zeros(a):
    classes = padic.locate_zeros(_series(a), a.depth)
    payload = {"classes": [{
        "residue": str(c.residue), "modulus": str(c.p**c.exponent),
        "resolved": c.resolved, "bound": c.bound,
    } for c in classes]}
    return payload, "\n".join(map(str, classes)) or "no zeros"


# -- dispatch ----------------------------------------------------------------

def _join_negative_values(argv):
    """Turn ``--base -1,0`` into ``--base=-1,0`` so argparse does not see an option.

    Every long option except --help takes a value, so a single-dash token
    right after one is always that value (e.g. ``--eq "-x^2+1=0"``).
    """
    out = []
    for tok in argv:
        prev = out[-1] if out else ""
        if (tok.startswith("-") and not tok.startswith("--") and tok != "-h"
                and prev.startswith("--") and "=" not in prev and prev != "--help"):
            out[-1] = f"{prev}={tok}"
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diophantine", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True
    for _, setup, _ in SUBCOMMANDS.values():
        setup(sub)
    return parser


def dispatch(argv) -> tuple[CommandResult, int, str]:
    """Run one command; returns (result, exit code, output format)."""
    argv = _join_negative_values(list(argv))
    fmt = "structured" if "--format=structured" in argv or any(
        a == "--format" and b == "structured" for a, b in zip(argv, argv[1:])) else "text"
    name = next((a for a in argv if a in SUBCOMMANDS), "")
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        return CommandResult(name, "error", {"message": str(exc)}, str(exc)), 2, fmt
    _, _, handler = SUBCOMMANDS[ns.command]
    try:
        payload, text = handler(ns)
    except ParseError as exc:
        return CommandResult(ns.command, "error", {"message": str(exc)}, str(exc)), 2, ns.format
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        return CommandResult(ns.command, "error", {"message": str(exc)}, str(exc)), 1, ns.format
    return CommandResult(ns.command, "ok", payload, text), 0, ns.format


def emit(result: CommandResult, fmt: str = "text") -> str:
    """Render a result; structured output is one compact JSON object."""
    if fmt == "structured":
        record = {"command": result.command, "status": result.status, "payload": result.payload}
        return json.dumps(record, separators=(",", ":"), ensure_ascii=False) + "\n"
    if result.status == "error":
        return f"error: {result.text}\n"
    return result.text + "\n"


def main(argv=None) -> int:
    result, code, fmt = dispatch(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if result.status == "ok" else sys.stderr
    stream.write(emit(result, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
