from __future__ import annotations

import json
from pathlib import Path

import pytest

from wiretap2.cli import main

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def _in_data_dir(monkeypatch):
    monkeypatch.chdir(DATA)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv, exit_code, golden",
    [
        (["check", "otp_instance.json", "otp_tuple.json"], 0, "check_feasible.json"),
        (["check", "otp_instance.json", "otp_no_key.json"], 3, "check_infeasible.json"),
        (["check", "otp_instance.json", "otp_tuple.json", "--variant", "key-recovered"], 0, "check_key_recovered.json"),
        (["minimize-key", "otp_instance.json", "2", "1", "1"], 0, "minimize_key_otp.json"),
        (["minimize-key", "otp_instance.json", "3", "1", "1"], 3, "minimize_key_capacity.json"),
        (["synthesize", "otp_instance.json", "otp_tuple.json"], 0, "synthesize_otp.json"),
        (["synthesize", "imperfect_instance.json", "imperfect_tuple.json"], 0, "synthesize_imperfect.json"),
        (["verify", "../golden/imperfect_code.json", "imperfect_instance.json"], 0, "verify_imperfect.json"),
        (["encode", "../golden/otp_code.json", "-m", "2", "-k", "1"], 0, "encode_otp.json"),
        (["decode", "../golden/otp_code.json", "1,0"], 0, "decode_otp.json"),
    ],
)
def test_golden_outputs(capsys, argv, exit_code, golden):
    code, out, _ = run(capsys, *argv)
    assert code == exit_code
    assert out == (GOLDEN / golden).read_text()


def test_check_witness(capsys):
    _, out, _ = run(capsys, "check", "otp_instance.json", "otp_tuple.json")
    assert json.loads(out)["witness"] == ["1", "1"]


def test_threshold_wiretap_minimum_key(capsys, tmp_path):
    sets = [[i, j] for i in range(1, 5) for j in range(i + 1, 5)]
    inst = tmp_path / "ow.json"
    inst.write_text(json.dumps({"q": 7, "capacities": [1] * 4, "wiretap_sets": sets}))
    code, out, _ = run(capsys, "minimize-key", str(inst), "2", *["2"] * 6)
    assert code == 0 and json.loads(out)["R_K"] == "2"


def test_synthesize_writes_verifiable_code(capsys, tmp_path):
    dest = tmp_path / "code.json"
    code, out, _ = run(capsys, "synthesize", "otp_instance.json", "otp_tuple.json", "--out", str(dest))
    assert code == 0
    assert json.loads(out)["code_file"] == str(dest)
    assert dest.read_text() == (GOLDEN / "otp_code.json").read_text()
    assert json.loads(dest.read_text())["generator"] == [[0, 1], [1, 1]]
    code, _, err = run(capsys, "verify", str(dest), "otp_instance.json")
    assert code == 0 and "overall: PASS" in err


def test_synthesize_infeasible(capsys):
    code, out, _ = run(capsys, "synthesize", "otp_instance.json", "otp_no_key.json")
    assert code == 3 and "certificate" in json.loads(out)


def test_synthesize_construction_failure(capsys, tmp_path):
    dest = tmp_path / "never.json"
    code, out, err = run(capsys, "synthesize", "saturating_instance.json", "saturating_tuple.json", "--out", str(dest))
    assert code == 4
    assert json.loads(out)["step"] == 4 and "{1,4} {2,4} {3,4}" in err
    assert not dest.exists()


def _write_code(tmp_path, generator, c_prime=(0, 0), n_M=2, n_K=0):
    data = json.loads((GOLDEN / "otp_code.json").read_text())
    data["params"].update(n_M=n_M, n_K=n_K, c_prime=list(c_prime))
    data["generator"] = generator
    path = tmp_path / "code.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_verify_identity_code_against_zero_bounds(capsys, tmp_path):
    path = _write_code(tmp_path, [[1, 0], [0, 1]])
    code, out, _ = run(capsys, "verify", path, "otp_instance.json")
    assert code == 3
    assert [s["pass"] for s in json.loads(out)["wiretap_sets"]] == [False, False]


def test_verify_tampered_generator(capsys, tmp_path):
    path = _write_code(tmp_path, [[0, 1], [0, 1]], n_M=1, n_K=1)
    code, out, _ = run(capsys, "verify", path, "otp_instance.json")
    report = json.loads(out)
    assert code == 3 and report["decode_identity_ok"] is False


def test_verify_mismatched_field(capsys, tmp_path):
    inst = tmp_path / "q5.json"
    inst.write_text(json.dumps({"q": 5, "capacities": [1, 1], "wiretap_sets": [[1], [2]]}))
    code, _, _ = run(capsys, "verify", "../golden/otp_code.json", str(inst))
    assert code == 2


def test_verify_cap_flag_and_env(capsys, monkeypatch):
    code, out, _ = run(capsys, "verify", "../golden/otp_code.json", "otp_instance.json", "--cap", "4")
    assert code == 0 and json.loads(out)["oracle_ran"] is False
    monkeypatch.setenv("WIRETAP2_CAP", "4")
    _, out, _ = run(capsys, "verify", "../golden/otp_code.json", "otp_instance.json")
    assert json.loads(out)["oracle_ran"] is False


def test_encode_wrong_arity(capsys):
    code, _, err = run(capsys, "encode", "../golden/otp_code.json", "-m", "2,1", "-k", "1")
    assert code == 2 and "message" in err


@pytest.mark.parametrize("word", ["1", "1,x", "1,3"])
def test_decode_bad_symbols(capsys, word):
    assert run(capsys, "decode", "../golden/otp_code.json", word)[0] == 2


def test_malformed_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "check", str(bad), "otp_tuple.json")[0] == 2
    assert run(capsys, "check", "otp_instance.json", str(bad))[0] == 2
    assert run(capsys, "check", "missing.json", "otp_tuple.json")[0] == 2


def test_invalid_instance(capsys, tmp_path):
    bad = tmp_path / "q6.json"
    bad.write_text(json.dumps({"q": 6, "capacities": [1, 1], "wiretap_sets": []}))
    code, _, err = run(capsys, "check", str(bad), "otp_tuple.json")
    assert code == 2 and "q=6 not a prime power" in err


def test_dimension_mismatch(capsys):
    assert run(capsys, "minimize-key", "otp_instance.json", "1", "1")[0] == 2
    assert run(capsys, "minimize-key", "otp_instance.json", "x", "1", "1")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [[], ["check", "otp_instance.json"], ["frobnicate"], ["check", "a", "b", "--variant", "nope"], ["verify", "a", "b", "--cap", "0"]],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 1


def test_output_flag(capsys, tmp_path):
    dest = tmp_path / "res.json"
    code, out, _ = run(capsys, "check", "otp_instance.json", "otp_tuple.json", "--out", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text() == (GOLDEN / "check_feasible.json").read_text()


def test_deterministic(capsys):
    outs = [run(capsys, "synthesize", "imperfect_instance.json", "imperfect_tuple.json", "--seed", "9")[1] for _ in range(2)]
    assert outs[0] == outs[1]
