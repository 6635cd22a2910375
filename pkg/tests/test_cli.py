import json
import subprocess
import sys
from collections import Counter
from fractions import Fraction

import pytest

from diophantine import cli, conics, cubics, etale, exact, padic
from diophantine import parser as eqparser

OPERATIONS = {
    exact.rational_roots, exact.discriminant, exact.resultant,
    eqparser.parse_equation, eqparser.is_point, eqparser.search_integer_points,
    conics.sweep, conics.slope_between, conics.pythagorean_triple,
    cubics.tangent_step, cubics.secant_step, cubics.tangent_iterates, cubics.to_weierstrass,
    cubics.add, cubics.multiply, cubics.nagell_lutz_test, cubics.torsion_subgroup,
    cubics.division_preimages, cubics.division_polynomial,
    etale.is_unit, etale.is_etale, etale.geometric_fiber_count, etale.covers_spec_z,
    padic.padic_log, padic.iterated_integral, padic.shuffle_check,
    padic.strassmann_bound, padic.locate_zeros,
}

LISTED = ["parse", "check-point", "search", "conic-sweep", "triples", "cubic-tangent",
          "cubic-secant", "cubic-iterate", "weierstrass-map", "ec-add", "ec-mul",
          "torsion-test", "torsion-subgroup", "divide", "etale-check", "fiber",
          "cover-check", "padic-log", "iterint", "strassmann", "zeros"]

SMOKE = {
    "parse": ["--eq", "x^2+y^2=1"],
    "check-point": ["--eq", "x^2+y^2=z^2", "--point", "99,20,101"],
    "search": ["--eq", "x^3+y^3=1729", "--bound", "12"],
    "conic-sweep": ["--eq", "x^2+y^2=1", "--base", "-1,0", "--slope", "10"],
    "slope": ["--eq", "x^2+y^2=1", "--base", "-1,0", "--other", "1,0"],
    "triples": ["--slope", "10"],
    "cubic-tangent": ["--c", "1729", "--point", "9,10"],
    "cubic-secant": ["--c", "1729", "--point", "1,12", "--other", "9,10"],
    "cubic-iterate": ["--c", "1729", "--point", "9,10", "--steps", "3"],
    "weierstrass-map": ["--c", "1729", "--point", "9,10"],
    "ec-add": ["--curve", "0,1", "--point", "0,1", "--other", "2,3"],
    "ec-mul": ["--curve", "0,1", "--point", "2,3", "--n", "6"],
    "torsion-test": ["--curve", "0,1", "--point", "2,3"],
    "torsion-subgroup": ["--curve", "0,1"],
    "divide": ["--curve", "0,1", "--point", "0,-1", "--n", "2"],
    "divpoly": ["--curve", "0,1", "--n", "2"],
    "roots": ["--poly", "x^2-1"],
    "discriminant": ["--poly", "x^3+t*x+1"],
    "resultant": ["--poly", "x-1", "--other", "x+1"],
    "unit": ["--ring", "Z[1/2]", "--element", "-4"],
    "etale-check": ["--ring", "Z[1/2]", "--poly", "x^2+1"],
    "fiber": ["--poly", "x^2+1", "--prime", "5"],
    "cover-check": ["--map", "x^2+1,2", "--map", "x^2-x+2,7"],
    "padic-log": ["--p", "5", "--prec", "10", "--u", "6"],
    "iterint": ["--p", "5", "--prec", "8", "--word", "01", "--z", "5"],
    "shuffle": ["--p", "5", "--prec", "8", "--word", "1", "--other", "01", "--z", "5"],
    "strassmann": ["--p", "5", "--coeffs", "0,-1,1"],
    "zeros": ["--p", "5", "--depth", "3", "--coeffs", "0,-1,1"],
}


def _has_float(value):
    if isinstance(value, float):
        return True
    if isinstance(value, dict):
        return any(_has_float(v) for v in value.values())
    if isinstance(value, list):
        return any(_has_float(v) for v in value)
    return False


def run(*argv):
    result, code, fmt = cli.dispatch(list(argv))
    return result, code


def structured(*argv):
    result, code, fmt = cli.dispatch(["--format", "structured", *argv])
    return json.loads(cli.emit(result, fmt)), code


class TestCoverage:
    def test_every_operation_exactly_once(self):
        ops = Counter(op for op, _, _ in cli.SUBCOMMANDS.values())
        assert set(ops) == OPERATIONS
        assert all(n == 1 for n in ops.values())

    def test_listed_names_present(self):
        assert set(LISTED) <= set(cli.SUBCOMMANDS)

    @pytest.mark.parametrize("name", sorted(SMOKE))
    def test_smoke(self, name):
        result, code = run(name, *SMOKE[name])
        assert code == 0, result.text
        assert result.status == "ok"

    def test_smoke_table_complete(self):
        assert set(SMOKE) == set(cli.SUBCOMMANDS)


class TestExamples:
    def test_cubic_tangent(self):
        record, code = structured("cubic-tangent", "--c", "1729", "--point", "9,10")
        assert code == 0
        x, y = Fraction(record["payload"]["x"]), Fraction(record["payload"]["y"])
        assert (x, y) == (Fraction(-42465969, 468559), Fraction(24580, 271))

    def test_cubic_tangent_envelope(self):
        result, code, fmt = cli.dispatch(["--format", "structured", "cubic-tangent",
                                          "--c", "1729", "--point", "9,10"])
        assert cli.emit(result, fmt) == (
            '{"command":"cubic-tangent","status":"ok",'
            '"payload":{"x":"-24561/271","y":"24580/271"}}\n')

    def test_triples(self):
        result, code = run("triples", "--slope", "10")
        assert code == 0 and cli.emit(result) == "99 20 101\n"
        record, _ = structured("triples", "--slope", "10")
        assert record["payload"] == {"triple": ["99", "20", "101"]}

    def test_conic_sweep(self):
        record, code = structured("conic-sweep", "--eq", "x^2+y^2=1", "--base", "-1,0", "--slope", "10")
        assert record["payload"] == {"x": "-99/101", "y": "20/101"}

    def test_negative_slope_and_vertical(self):
        record, _ = structured("conic-sweep", "--eq", "x^2+y^2=1", "--base", "0,1", "--slope", "vertical")
        assert record["payload"] == {"x": "0", "y": "-1"}
        result, code = run("conic-sweep", "--eq", "x^2+y^2=1", "--base", "-1,0", "--slope", "-1/2")
        assert code == 0

    def test_padic_output(self):
        result, code = run("padic-log", "--p", "5", "--prec", "10", "--u", "6")
        assert cli.emit(result).endswith(" + O(5^10)\n")
        record, _ = structured("iterint", "--p", "5", "--prec", "8", "--word", "01", "--z", "5")
        value = record["payload"]["value"]
        assert value["p"] == 5 and value["prec"] == 8 and isinstance(value["rep"], str)

    def test_torsion_verdict(self):
        record, _ = structured("torsion-test", "--curve", f"0,{-432 * 1729**2}", "--point", "1092,-3276")
        payload = record["payload"]
        assert payload["torsion"] is False and payload["multiple"] == 2
        assert payload["reason"] == cubics.Y2_NOT_DIVIDING

    def test_cubic_iterate_narrative(self):
        result, code = run("cubic-iterate", "--c", "1729", "--point", "9,10", "--steps", "3")
        lines = cli.emit(result).splitlines()
        assert len(lines) == 3 and all("NonTorsion" in line for line in lines)

    def test_cover_report(self):
        record, _ = structured("cover-check", "--map", "x^2+1,2")
        assert record["payload"]["covers"] is False
        assert record["payload"]["uncovered_primes"] == [2]

    def test_etale_qt(self):
        record, _ = structured("etale-check", "--ring", "Q[t]", "--poly", "x^2-t")
        assert record["payload"]["etale"] is False
        assert record["payload"]["discriminant"] == "4*t"
        assert record["payload"]["witness"] == "t"

    def test_equation_from_file(self, tmp_path):
        path = tmp_path / "eq.txt"
        path.write_text("x^3 + y^3 = 1729\n")
        record, code = structured("search", "--eq", f"@{path}", "--bound", "12")
        assert code == 0 and len(record["payload"]["solutions"]) == 4


class TestExitCodes:
    def test_usage_error(self):
        result, code = run("conic-sweep", "--eq", "x^2+y^2=1", "--base", "-1,0", "--slope", "foo")
        assert code == 2 and result.status == "error"
        assert cli.emit(result).startswith("error: ")

    def test_unknown_subcommand(self):
        result, code = run("frobnicate")
        assert code == 2
        assert "cubic-tangent" in result.text

    def test_missing_subcommand(self):
        assert run()[1] == 2

    def test_parse_error(self):
        result, code = run("parse", "--eq", "x^+1")
        assert code == 2 and "offset 2" in result.text

    def test_domain_error(self):
        result, code = run("cubic-tangent", "--c", "2", "--point", "1,1")
        assert code == 1 and "third point at infinity" in result.text
        result, code = run("triples", "--slope", "1")
        assert code == 1 and "degenerate triple" in result.text
        result, code = run("fiber", "--poly", "x^2+1", "--prime", "4")
        assert code == 1

    def test_error_is_one_line(self):
        result, _ = run("cubic-secant", "--c", "1729", "--point", "9,10", "--other", "10,9")
        text = cli.emit(result)
        assert text.startswith("error: ") and text.count("\n") == 1

    def test_streams(self, capsys):
        assert cli.main(["triples", "--slope", "10"]) == 0
        out, err = capsys.readouterr()
        assert out == "99 20 101\n" and err == ""
        assert cli.main(["triples", "--slope", "1"]) == 1
        out, err = capsys.readouterr()
        assert out == "" and err.startswith("error: ")


class TestDeterminism:
    @pytest.mark.parametrize("name", ["cubic-iterate", "torsion-subgroup", "zeros", "cover-check"])
    def test_identical_bytes(self, name):
        argv = ["--format", "structured", name, *SMOKE[name]]
        first = cli.emit(*cli.dispatch(argv)[::2])
        second = cli.emit(*cli.dispatch(argv)[::2])
        assert first == second

    def test_payload_round_trips(self):
        for name, argv in SMOKE.items():
            result, code, fmt = cli.dispatch(["--format", "structured", name, *argv])
            record = json.loads(cli.emit(result, fmt))
            assert record["payload"] == result.payload
            assert not _has_float(record["payload"])

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "diophantine", "triples", "--slope", "2"],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0 and proc.stdout == "3 4 5\n"
