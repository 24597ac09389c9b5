"""Expression grammar, report schemas, golden files, exit codes."""

import json
import os
from fractions import Fraction
from importlib import resources
from pathlib import Path

import pytest
from jsonschema import validate

from gop.catalog import CATALOG, hypergeom_operator
from gop.cli import main, operator_text, parse_operator, run_command
from gop.diffop import Basis, DiffOp
from gop.errors import MixedBasisError, ParseError

GOLDEN_DIR = Path(__file__).parent / "golden"

GOLDEN_CASES = {
    "classify_theta2m2": ["classify", "--catalog", "theta2m2"],
    "classify_polylog1": ["classify", "--catalog", "polylog:1"],
    "exponents_gauss_inf": ["exponents", "--catalog", "gauss2f1", "--point", "inf"],
    "pcurv_polylog2_p5": ["pcurv", "--catalog", "polylog:2", "--prime", "5"],
    "scan_dm1": ["scan", "--catalog", "d-minus-1", "--primes", "2..20"],
    "scan_polylog2": ["scan", "--catalog", "polylog:2", "--primes", "2..20"],
    "galochkin_polylog1": ["galochkin", "--catalog", "polylog:1", "--smax", "12"],
    "size_polylog1": ["size", "--catalog", "polylog:1", "--s", "12", "--prime-bound", "13"],
    "radius_polylog1": ["radius", "--catalog", "polylog:1", "--prime", "2", "--smax", "16"],
    "bombieri_polylog1": ["bombieri", "--catalog", "polylog:1", "--s", "20", "--prime-bound", "23"],
    "pade_polylog2": ["pade", "--catalog", "polylog:2", "--N", "12", "--M", "4"],
    "catalog_list": ["catalog", "list"],
    "catalog_get_polylog1": ["catalog", "get", "polylog:1"],
}


def load_schema(command):
    with resources.files("gop.schemas").joinpath(f"{command}.json").open() as fh:
        return json.load(fh)


# -- grammar


def test_parse_examples():
    li1 = parse_operator("(1-z)*D^2 - D")
    assert li1.order == 2 and li1.basis is Basis.D
    th = parse_operator("theta^2 - 2")
    assert th == DiffOp(Basis.THETA, [-2, 0, 1])
    gauss = parse_operator("theta*(theta) - z*(theta+1/2)^2")
    assert gauss == hypergeom_operator([Fraction(1, 2), Fraction(1, 2)], [1])


def test_parse_scalars_and_precedence():
    op = parse_operator("2*D + 3*D")
    assert op == parse_operator("5*D")
    assert parse_operator("1/2*z*D") == parse_operator("(z/2)*D")
    assert parse_operator("D*z") == parse_operator("z*D + 1")
    assert parse_operator("-D + D").is_zero()


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_operator("D + $")
    assert err.value.column == 4
    with pytest.raises(ParseError):
        parse_operator("D D")
    with pytest.raises(ParseError):
        parse_operator("(D")
    with pytest.raises(ParseError):
        parse_operator("D/z")
    with pytest.raises(MixedBasisError):
        parse_operator("D + theta")


def test_roundtrip_catalog_operators():
    for entry in CATALOG.values():
        text = operator_text(entry.operator)
        assert parse_operator(text) == entry.operator


# -- dispatch and formats


def test_golden_files():
    for name, argv in GOLDEN_CASES.items():
        code, env = run_command(argv)
        assert code == 0, name
        env["timing_ms"] = 0
        want = json.loads((GOLDEN_DIR / f"{name}.json").read_text())
        assert env == want, name


def test_schema_validation():
    for name, argv in GOLDEN_CASES.items():
        code, env = run_command(argv)
        assert code == 0
        validate(env, load_schema(env["command"]))


def test_exit_codes():
    code, _ = run_command(["classify", "theta^2 - 2"])
    assert code == 0
    code, env = run_command(["classify", "bogus("])
    assert code == 1 and "error" in env
    code, env = run_command(["pcurv", "D - 1/(2*z)", "--prime", "2"])
    assert code == 2 and env["error_kind"] == "BadPrime"
    code, env = run_command(["exponents", "D - 1", "--point", "inf"])
    assert code == 2 and env["error_kind"] == "IrregularPoint"
    code, _ = run_command(["scan", "--primes", "bad"])
    assert code == 1


def test_scan_badprime_inline_not_fatal():
    code, env = run_command(["scan", "D - 1/(2*z)", "--primes", "2..7"])
    assert code == 0
    by_p = {r["prime"]: r for r in env["result"]["reports"]}
    assert by_p[2]["status"] == "BadPrime"
    assert env["result"]["verdict"] == "AllGoodNilpotent"


def test_series_file_pade(tmp_path):
    data = {
        "trunc_order": 12,
        "components": [[["1", "1"] for _ in range(12)]],
    }
    path = tmp_path / "series.json"
    path.write_text(json.dumps(data))
    code, env = run_command(["pade", "--series", str(path), "--N", "1", "--M", "1"])
    assert code == 0
    assert env["result"]["Q"]["coeffs"] == ["1", "-1"]
    assert env["result"]["P"][0]["coeffs"] == ["1"]
    validate(env, load_schema("pade"))


def test_text_format(capsys):
    rc = main(["--format", "text", "exponents", "theta^2 - 2", "--point", "0"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "rational_exponents" in out and "{" not in out


def test_json_format_default(capsys):
    rc = main(["catalog", "list"])
    out = capsys.readouterr().out
    assert rc == 0
    parsed = json.loads(out)
    assert parsed["command"] == "catalog"


def test_threaded_scan_deterministic():
    code, plain = run_command(["scan", "--catalog", "polylog:1", "--primes", "2..30"])
    os.environ["GOP_THREADS"] = "4"
    try:
        code2, threaded = run_command(["scan", "--catalog", "polylog:1", "--primes", "2..30"])
    finally:
        del os.environ["GOP_THREADS"]
    plain["timing_ms"] = threaded["timing_ms"] = 0
    assert code == code2 == 0
    assert plain == threaded
