from fractions import Fraction
import io
from pathlib import Path

import pytest

from kgsing import config, report
from kgsing.cli import EXIT_ERROR, EXIT_NONGENERIC, EXIT_OK, main
from kgsing.errors import ParseError, ValidationError
from kgsing.parse import parse_document

DATA = Path(__file__).parent / "data"


def run(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, io.StringIO(stdin_text), out, err)
    return code, out.getvalue(), err.getvalue()


# --- input documents ---------------------------------------------------------

def test_parse_valid_document():
    doc = parse_document("vars: x1, x2, x3\ng: x1\nh: x3 + x1^2\npoint: 0, 0, 0\n")
    s = doc.system
    assert s.nvars == 3 and len(s.g) == 1 and len(s.h) == 1
    assert s.base_point == (0, 0, 0) and not doc.has_family


def test_parse_equality_not_vanishing():
    with pytest.raises(ValidationError):
        parse_document("vars: x1, x2\nh: x1 + 1\npoint: 0, 0\n")


def test_parse_family_block():
    doc = parse_document("vars: x1, x2\nparams: u1\ng: x1 + u1*x2\npoint: 0, 0\n")
    assert doc.has_family and doc.params == ("u1",)
    (d,) = doc.directions()
    assert str(d[0]) == "x2"
    assert str(doc.system.g[0]) == "x1"


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse_document("vars: x1\ng: x1 + * 2\npoint: 0\n")
    assert e.value.line == 2


def test_parse_point_length_mismatch():
    with pytest.raises(ValidationError):
        parse_document("vars: x1, x2\ng: x1\npoint: 0\n")


def test_parse_rational_point():
    doc = parse_document("vars: x1\ng: x1 - 1/3\npoint: 1/3\n")
    assert doc.system.base_point == (Fraction(1, 3),)


# --- report format -----------------------------------------------------------

def test_report_roundtrip_exact_values():
    tree = {"a": {"b": Fraction(-3, 7), "c": [1, 2, {"d": "x"}]}, "e": [], "f": None,
            "g": True, "h": 0.25}
    assert report.loads(report.dumps(tree)) == tree


def test_report_keys_keep_order():
    text = report.dumps({"z": 1, "a": 2})
    assert text.splitlines() == ["z = 1", "a = 2"]


# --- configuration -------------------------------------------------------------

def test_config_defaults():
    c = config.load({}, {})
    assert (c.max_degree, c.mode, c.tol, c.budget, c.format) == (8, "exact", 1e-9, 4, "text")
    assert c.numeric_tol is None


def test_config_env_then_flags():
    env = {"KGSING_BUDGET": "2", "KGSING_MODE": "approx"}
    c = config.load({"budget": 3}, env)
    assert c.budget == 3 and c.mode == "approx" and c.numeric_tol == 1e-9


@pytest.mark.parametrize("bad", [{"budget": 5}, {"mode": "fast"}, {"tol": 0.0}, {"jobs": 0}])
def test_config_validation(bad):
    with pytest.raises(ValidationError):
        config.load(bad, {})


def test_config_bad_env_value():
    with pytest.raises(ValidationError):
        config.load({}, {"KGSING_BUDGET": "many"})


# --- command line --------------------------------------------------------------

def test_cli_classify_cubic():
    code, out, _ = run(["analyze", "--classify", "--budget", "4", str(DATA / "cubic.kgs")])
    assert code == EXIT_OK
    assert "label: (1,3)" in out


def test_cli_golden_structured_report():
    code, out, _ = run(["analyze", "--format", "structured", str(DATA / "cubic.kgs")])
    assert code == EXIT_OK
    assert out == (DATA / "cubic.golden").read_text()


def test_cli_structured_roundtrip():
    code, out, _ = run(["analyze", "--format", "structured", str(DATA / "cubic.kgs")])
    tree = report.loads(out)
    assert tree["schema"] == report.SCHEMA
    assert report.dumps(tree) == out
    assert tree["codim"]["kge"]["value"] == 2
    assert tree["classification"]["label"] == "(1,3)"


def test_cli_deterministic():
    a = run(["analyze", "--format", "structured", str(DATA / "reduce.kgs")])
    b = run(["analyze", "--format", "structured", str(DATA / "reduce.kgs")])
    assert a == b and a[0] == EXIT_OK


def test_cli_reads_stdin():
    text = (DATA / "reduce.kgs").read_text()
    code, out, _ = run(["analyze", "--reduce", "--format", "structured", "-"], text)
    tree = report.loads(out)
    assert code == EXIT_OK
    assert tree["activation"]["active"] == [0]
    assert tree["reduction"]["germ"]["nvars"] == 2
    assert tree["reduction"]["submersion"] is True


def test_cli_family_versal_and_audit():
    code, out, _ = run(["analyze", "--versal", "--audit", "--format", "structured",
                        str(DATA / "cubic_family.kgs")])
    tree = report.loads(out)
    assert code == EXIT_OK
    assert tree["versal"]["versal"] is True
    assert tree["audit"]["status"] == "generic"


def test_cli_versal_without_params_is_error():
    code, _, err = run(["analyze", "--versal", str(DATA / "cubic.kgs")])
    assert code == EXIT_ERROR and err.startswith("error [")


def test_cli_parse_error_exit_code():
    code, _, err = run(["analyze", "-"], "vars: x1\ng: x1 +\npoint: 0\n")
    assert code == EXIT_ERROR
    assert err.startswith("error [parse_error]:") and "line 2" in err


def test_cli_missing_file():
    code, _, _ = run(["analyze", str(DATA / "does-not-exist.kgs")])
    assert code == EXIT_ERROR


def test_cli_nongeneric_audit_exit():
    code, out, _ = run(["analyze", "--audit", "-"],
                       "vars: x1, x2, x3\ng: x1, -x1 + x2^2*x3^2\npoint: 0, 0, 0\n")
    assert code == EXIT_NONGENERIC
    assert "non-generic" in out


def test_cli_audit_c2():
    code, out, _ = run(["audit", "c2-dtlz2", "--M", "3", "--k", "2", "--l", "1",
                        "--format", "structured"])
    tree = report.loads(out)
    assert code == EXIT_OK
    assert tree["verdict"] == "generic"
    assert tree["facts"]["kge_codim"]["value"] == 1


def test_cli_audit_c1():
    code, out, _ = run(["audit", "c1-dtlz1", "--M", "3", "--k", "1", "--format", "structured"])
    tree = report.loads(out)
    assert code == EXIT_NONGENERIC
    assert tree["verdict"] == "non-generic"


def test_cli_env_override(monkeypatch):
    monkeypatch.setenv("KGSING_FORMAT", "structured")
    code, out, _ = run(["analyze", "--classify", str(DATA / "cubic.kgs")])
    assert code == EXIT_OK and out.startswith("schema = ")


def test_cli_bad_budget():
    code, _, err = run(["analyze", "--budget", "7", str(DATA / "cubic.kgs")])
    assert code == EXIT_ERROR and "budget" in err
