import io
import json

import pytest

from matrix_scheme.cli import TOL_ENV, run

J2 = {"r": 2, "n": 1, "mode": "exact", "matrices": [[["0", "1"], ["0", "0"]]]}
NEAR_J2 = {"r": 2, "n": 1, "matrices": [[[0.0, 1.0], [1e-12, 0.0]]]}


def call(argv, payload):
    text = payload if isinstance(payload, str) else json.dumps(payload)
    out = io.StringIO()
    code = run(argv, stdin=io.StringIO(text), stdout=out)
    return code, out.getvalue()


def call_json(argv, payload):
    code, text = call(argv, payload)
    return code, json.loads(text)


def test_analyze_json():
    code, out = call_json(["analyze"], J2)
    assert code == 0
    assert out["determinacy_order"] == 1
    assert out["support"] == [{"q": ["0/1"], "mult": 2, "local_dim": 2, "nilpotency": 2,
                               "filtration": [2, 1, 0]}]


def test_analyze_text():
    code, text = call(["analyze", "--format", "text"], J2)
    assert code == 0
    assert "determinacy order 1" in text and "filtration (2, 1, 0)" in text


def test_domain_errors_exit_one_with_error_object():
    rot = {"r": 2, "n": 1, "matrices": [[["0", "-1"], ["1", "0"]]]}
    code, out = call_json(["analyze"], rot)
    assert code == 1 and out["error"]["type"] == "NonRealSpectrum"
    code, text = call(["analyze", "--format", "text"], rot)
    assert code == 1 and text.startswith("error: NonRealSpectrum")


@pytest.mark.parametrize("payload", ["{not json", "[1, 2]", json.dumps({"r": 2}),
                                     json.dumps({"matrices": [[["1", "x"]]]})])
def test_malformed_input_exits_two(payload):
    code, out = call_json(["analyze"], payload)
    assert code == 2 and out["error"]["type"] == "InputError"


def test_usage_errors(tmp_path):
    assert call(["nonsense"], "{}")[0] == 2
    assert call([], "{}")[0] == 2
    code, out = call_json(["analyze", "--input", str(tmp_path / "missing.json")], "")
    assert code == 2 and "cannot read input" in out["error"]["message"]


def test_input_file_and_mode_override(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(J2))
    code, out = call_json(["analyze", "--input", str(path), "--mode", "numeric"], "")
    assert code == 0 and out["mode"] == "numeric" and out["support"][0]["mult"] == 2


def test_tolerance_flag_and_environment(monkeypatch):
    monkeypatch.delenv(TOL_ENV, raising=False)
    assert len(call_json(["analyze"], NEAR_J2)[1]["support"]) == 1
    assert len(call_json(["analyze", "--tol", "1e-15"], NEAR_J2)[1]["support"]) == 2
    monkeypatch.setenv(TOL_ENV, "1e-15")
    assert len(call_json(["analyze"], NEAR_J2)[1]["support"]) == 2
    assert len(call_json(["analyze", "--tol", "1e-9"], NEAR_J2)[1]["support"]) == 1
    monkeypatch.setenv(TOL_ENV, "tiny")
    assert call(["analyze"], NEAR_J2)[0] == 2


def test_tol_in_exact_mode_warns(capsys):
    code, _ = call(["analyze", "--mode", "exact", "--tol", "1e-3"], J2)
    assert code == 0 and "no effect" in capsys.readouterr().err


def test_eval():
    code, out = call_json(["eval"], {"f": "y^3 + y", "tuple": {"matrices": [[["1", "0"], ["0", "2"]]]}})
    assert code == 0 and out["matrix"] == [["2/1", "0/1"], ["0/1", "10/1"]]
    assert call(["eval"], {"tuple": J2})[0] == 2
    assert call(["eval"], {"f": "y1*y2", "tuple": J2})[0] == 2


def test_determinacy():
    code, out = call_json(["determinacy"], {"gens": ["y^2"], "query": "y", "k": 1})
    assert code == 0 and out["verdict"] is False
    assert out["witness"] == {"point": ["0/1"], "exponent": [1]}
    code, out = call_json(["determinacy"], {"gens": ["y^2 - 2"], "query": "y"})
    assert code == 1 and out["error"]["type"] == "SplitFailure"


def test_family():
    payload = {"window": [["-1", "1"]], "matrices": [[["0", "1"], ["x", "0"]]], "samples": [5]}
    code, out = call_json(["family"], payload)
    assert code == 0
    assert out["admissible"] == [False, False, True, True, True]
    assert len(out["branches"]) == 1
    code, out = call_json(["family"], dict(payload, op="surrogate"))
    assert code == 0 and "strata" in out and "admissible" not in out
    assert call(["family"], dict(payload, samples=[5, 5]))[0] == 2
    assert call(["family"], dict(payload, op="melt"))[0] == 2


def test_weil_ops():
    dual = {"quotient": "x^2"}
    assert call_json(["weil"], {"op": "is_weil", "algebra": dual})[1] == {"is_weil": True}
    assert call_json(["weil"], {"op": "nilpotency", "algebra": {"quotient": "x^3"}})[1] == {"nilpotency": 3}
    code, out = call_json(["weil"], {"op": "tensor", "algebras": [dual, dual]})
    assert code == 0 and out["algebra"]["dim"] == 4
    code, out = call_json(["weil"], {"op": "decompose", "algebra": {"quotient": "x^3 - x"}})
    assert code == 0 and len(out["factors"]) == 3
    mono = {"monomial": {"n": 2, "gens": [[2, 0], [1, 1], [0, 2]]}}
    assert call_json(["weil"], {"op": "is_weil", "algebra": mono})[1] == {"is_weil": True}
    assert call(["weil"], {"op": "fold", "algebra": dual})[0] == 2
