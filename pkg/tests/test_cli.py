import io
import json
import subprocess
import sys

import pytest

from lmhs import examples
from lmhs.cli import (
    EXIT_DOMAIN,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_PRECONDITION,
    SchemaError,
    parse_problem,
    parse_report,
    run,
)


def call(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        code = run(list(argv), out, err)
    finally:
        sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def emitted(*argv):
    code, out, _ = call(*argv)
    assert code == EXIT_OK
    return out


def write(tmp_path, text, name="problem.json"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_genus3_lmhs_check_passes(tmp_path):
    path = write(tmp_path, emitted("example", "genus3"))
    code, out, _ = call("lmhs-check", "--input", path, "--format", "json")
    report = parse_report(json.loads(out))
    assert code == EXIT_OK and report["verdict"] == "pass"
    assert report["result"]["cone_weight_independence"] is True


def test_surface_validate_fails_with_square(tmp_path):
    path = write(tmp_path, emitted("strata", "surface", "--c1sq", "1", "--c2sq", "1"))
    code, out, _ = call("strata", "validate", "--input", path, "--format", "json")
    report = json.loads(out)
    assert code == EXIT_DOMAIN
    assert report["result"]["clause"] == "anticommutativity"
    assert report["result"]["witness"]["square"] == [2, 0]
    assert report["metadata"]["input"]["composite"] == "1"


@pytest.mark.parametrize(
    "text, code",
    [
        ('{"kind":"deform","payload":{"ext_dim":1,"components":["a"],"localize":[["1/0"]]}}', EXIT_PARSE),
        ('{"kind":"deform","payload":{"ext_dim":1,"components":["a"],"localize":[[0.5]]}}', EXIT_PARSE),
        ('{"kind":"deform","payload":{"ext_dim":1,"components":["a"],"localize":[[1]],"x":1}}', EXIT_PARSE),
        ('{"kind":"nope","payload":{}}', EXIT_PARSE),
        ("[1, 2", EXIT_PARSE),
        ('{"kind":"deform","payload":{"ext_dim":1,"components":["a"],"localize":[[0]]}}', EXIT_PRECONDITION),
    ],
)
def test_exit_codes(tmp_path, text, code):
    path = write(tmp_path, text)
    assert call("deform", "cone", "--input", path)[0] == code


def test_precondition_from_domain_constructor(tmp_path):
    # antisymmetric Q with even weight parity is rejected by the domain type
    problem = json.loads(emitted("example", "elliptic"))
    problem["payload"]["center"] = 2
    path = write(tmp_path, json.dumps(problem))
    assert call("lmhs-check", "--input", path)[0] == EXIT_PRECONDITION


def test_wrong_kind_is_schema_error(tmp_path):
    path = write(tmp_path, emitted("example", "genus3-strata"))
    assert call("deligne", "--input", path)[0] == EXIT_PARSE


def test_missing_input_and_bad_command():
    assert call("deligne")[0] == EXIT_PARSE
    assert call("frobnicate")[0] == EXIT_PARSE


@pytest.mark.parametrize(
    "argv",
    [
        ("weight-filtration",),
        ("deligne",),
        ("rsplit",),
        ("lmhs-check",),
        ("limit-period",),
        ("nstrings",),
    ],
)
def test_orbit_reports_are_deterministic_and_round_trip(tmp_path, argv):
    path = write(tmp_path, emitted("example", "genus3"))
    first = call(*argv, "--input", path, "--format", "json")
    second = call(*argv, "--input", path, "--format", "json")
    assert first == second and first[0] == EXIT_OK
    parse_report(json.loads(first[1]))


@pytest.mark.parametrize(
    "argv", [("strata", "validate"), ("strata", "e1", "--i", "1"), ("strata", "nstrings", "--m", "1")]
)
def test_strata_reports(tmp_path, argv):
    path = write(tmp_path, emitted("example", "genus3-strata"))
    code, out, _ = call(*argv, "--input", path, "--format", "json")
    assert code == EXIT_OK
    parse_report(json.loads(out))


def test_strata_nstrings_report_content(tmp_path):
    path = write(tmp_path, emitted("example", "genus3-strata"))
    report = json.loads(call("strata", "nstrings", "--m", "1", "--input", path, "--format", "json")[1])
    assert report["result"]["graded_dims"] == [{"weight": w, "dim": 2} for w in (0, 1, 2)]
    pieces = [(p["i"], p["j"]) for p in report["result"]["pieces"]]
    assert pieces == sorted(pieces)


@pytest.mark.parametrize("action", ["strata", "cone", "classify-p2"])
def test_deform_reports(tmp_path, action):
    text = '{"kind":"deform","payload":{"ext_dim":2,"components":["D1","D2","D3"],"localize":[[1,0],[0,1],[1,1]],"delta":null}}'
    path = write(tmp_path, text)
    code, out, _ = call("deform", action, "--input", path, "--format", "json")
    assert code == EXIT_OK
    report = parse_report(json.loads(out))
    if action == "strata":
        assert [s["B"] for s in report["result"]["strata"]][:3] == [[], ["D1"], ["D1", "D2"]]


def test_emitted_problems_rebuild_the_fixtures():
    kind, (orbit, N), _ = parse_problem(json.loads(emitted("example", "genus3")))
    fixture = examples.genus3_orbit()
    assert kind == "orbit" and orbit.F == fixture.F and N == fixture.default_N()
    kind, data, meta = parse_problem(json.loads(emitted("example", "genus2", "--case", "ii")))
    assert len(data[0].generators) == 3 and meta["fixture"] == "genus2-ii"
    kind, data, _ = parse_problem(json.loads(emitted("example", "genus3-strata")))
    assert kind == "strata" and data.to_json() == examples.genus3_strata().to_json()


def test_genus3_params_file(tmp_path):
    params = write(tmp_path, '{"a11": "1/2", "c": {"re": "0", "im": "2"}}', "params.json")
    kind, (orbit, _), _ = parse_problem(json.loads(emitted("example", "genus3", "--params", params)))
    data = examples.genus3_extension_data(orbit)
    assert data["reparametrization_dependent"]["a11"].to_json() == "1/2"
    bad = write(tmp_path, '{"c": {"re": "0", "im": "-1"}}', "bad.json")
    assert call("example", "genus3", "--params", bad)[0] == EXIT_PRECONDITION


def test_deligne_reports_non_mixed_witness(tmp_path):
    text = '{"kind":"mhs","payload":{"ambient_dim":2,"weight_center":0,"W":{"0":[[1,0],[0,1]]},"F":{"1":[[1,0]]}}}'
    code, out, _ = call("deligne", "--input", write(tmp_path, text), "--format", "json")
    assert code == EXIT_DOMAIN
    assert json.loads(out)["result"]["witness"]["k"] == 0


def test_text_format_and_global_flags(tmp_path):
    path = write(tmp_path, emitted("example", "genus3"))
    code, out, _ = call("--format", "text", "--seed", "5", "lmhs-check", "--input", path)
    assert code == EXIT_OK and out.startswith('command: "lmhs-check"') and "seed: 5" in out


def test_parse_report_is_strict():
    with pytest.raises(SchemaError):
        parse_report({"command": "x", "verdict": "pass", "result": {}, "metadata": {}, "extra": 1})


def test_console_script_pipeline():
    gen = subprocess.run([sys.executable, "-m", "lmhs", "example", "genus3"], capture_output=True, text=True)
    check = subprocess.run(
        [sys.executable, "-m", "lmhs", "lmhs-check", "--input", "-"], input=gen.stdout, capture_output=True, text=True
    )
    assert gen.returncode == 0 and check.returncode == 0
    assert 'verdict: "pass"' in check.stdout
