import io
import json
import subprocess
import sys

import pytest

from tangdeform.cli import run

NODAL = "x1^2*x2 - x0^3 - x0^2*x2"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    rc = run(list(argv), out, err)
    return rc, out.getvalue(), err.getvalue()


def ok(*argv):
    rc, out, err = call(*argv)
    assert rc == 0, err or out
    return json.loads(out)


def test_parse_and_envelope():
    r = ok("parse", "x1*x0 + x0^2")
    assert r["poly"] == "x0^2 + x0*x1" and r["degree"] == 2
    assert r["command"] == "parse" and r["config"]["field"] == "q"
    assert set(r["config"]) == {"bound", "budget", "caps", "field", "nvars", "output", "seed"}


def test_json_is_stable():
    a = call("smooth-search", "--seed", "42", "--points", "(0:0:1)", NODAL)[1]
    b = call("smooth-search", "--seed", "42", "--points", "(0:0:1)", NODAL)[1]
    assert a == b
    assert a == json.dumps(json.loads(a), sort_keys=True) + "\n"


def test_smoothable_example():
    r = ok("smoothable", "--field", "q", "--nvars", "3", "--points", "(0:0:1)", NODAL)
    assert r["decision"] == "Smoothable"


def test_obstructed():
    r = ok("smoothable", "--points", "(0:0:1)", "x0^4 + x1^3*x2")
    assert r["decision"] == "Obstructed"
    r = ok("obstruct", "--point", "(0:0:1)", "x0^4 + x1^3*x2")
    assert r["multiplicity"] == 3


def test_repeated_points_flag():
    r = ok("smoothable", "--points", "(1:0:0)", "--points", "(0:1:0)", "--points", "(0:0:1)", "x0*x1*x2")
    assert r["decision"] == "Smoothable" and len(r["points"]) == 3


def test_smooth_search_failure_reports_null():
    r = ok("smooth-search", "--seed", "42", "--budget", "20", "--points", "(0:0:1)", "x0^4 + x1^3*x2")
    assert r["certificate"] is None


@pytest.mark.parametrize("argv, key, value", [
    (["smooth", "x0^3 + x1^3 + x2^3"], "smooth", True),
    (["multiplicity", "--point", "(0:0:1)", "x0^5 + x1^4*x2"], "multiplicity", 4),
    (["jacobian", "x0^3 + x1^3 + x2^3"], "dimension", 9),
    (["member", "--h", "x0*x1^2", "x0^3 + x1^3 + x2^3"], "member", True),
    (["construct-ttu", "x0^3 + x1^3 + x2^3", "x0^4 + x1^4 + x2^4"], "certified", True),
    (["weierstrass", "--a", "1", "--b", "1", "--t", "3"], "passed", True),
    (["equiv", "--field", "fp:3", "x0*x1*x2", "x0^3"], "equivalent", False),
    (["pencil-scan", "--field", "fp:5", "x0^3 + x1^3 + x2^3", "x0*x1*x2"], "reducible_count", 2),
    (["lin-group", "--roots", "(0:1),(1:1),(1:0),(2:1),(5:1)"], "order", 1),
    (["lin-group", "x0^2*x1 - x0*x1^2"], "order", 6),
])
def test_subcommands(argv, key, value):
    assert ok(*argv)[key] == value


def test_singular_scan_fp():
    r = ok("singular", "--field", "fp:7", NODAL)
    assert [p["point"] for p in r["singular_points"]] == ["(0:0:1)"]


def test_triviality_and_experiment():
    r = ok("triviality-scan", "--field", "fp:3", "--candidates", "x0^2", "x0^2 + x1^2 + x2^2")
    assert len(r["candidates"]) == 1
    r = ok("intersect-experiment", "--count", "4", "--seed", "42", "x0^4 + x1^4 + x2^4")
    assert len(r["dimensions"]) == 4


def test_shared_variable_count():
    r = ok("equiv", "--field", "fp:3", "x0^2", "x1^2")
    assert r["equivalent"] is True
    assert ok("member", "--h", "x2^3", "x0^3")["member"] is False


def test_lin_group_not_split():
    assert ok("lin-group", "x0^2 + x1^2")["splits"] is False


@pytest.mark.parametrize("argv, kind", [
    (["parse", "x0^2 + x1"], "NotHomogeneous"),
    (["parse", "x0^2 + * x1"], "SyntaxError"),
    (["smooth", "--field", "fp:3", "x0^3 + x1^3 + x2^3"], "CharacteristicTooSmall"),
    (["weierstrass", "--a", "0", "--b", "0", "--t", "3"], "SingularCubic"),
    (["equiv", "--field", "fp:7", "x0^2 + x1^2 + x2^2", "x0*x1 + x2^2"], "BudgetExceeded"),
    (["smoothable", "--points", "(1:0:0)", NODAL], "IncompletePointList"),
])
def test_domain_errors_exit_1(argv, kind):
    rc, out, _ = call(*argv)
    assert rc == 1
    assert json.loads(out)["error"]["kind"] == kind


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["smooth", "--nope", "x0^2"],
    ["smooth", "--field", "fp:9", "x0^2"],
    ["lin-group"],
])
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_human_output():
    rc, out, _ = call("smooth", "--output", "human", "x0^2 + x1^2")
    assert rc == 0 and "smooth" in out and not out.lstrip().startswith("{")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tangdeform", "smooth", "x0^2 + x1^2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["smooth"] is True
