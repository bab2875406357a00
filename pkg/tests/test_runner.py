import json

import pytest

from app.core.errors import InputError
from app.core.runner import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, RunConfig, run
from main import build_parser, start_app, to_config


def _write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_psi_run_writes_json(fixtures_dir, tmp_path):
    out = tmp_path / "psi.json"
    code = run(RunConfig("psi", [str(fixtures_dir / "matrix_2x2.json")], output_path=str(out), fmt="json"))
    assert code == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["values"] == {"()": "-2/1", "(1 2)": "3/1"}
    assert report["total"] == "1/1"


def test_certify_exit_codes(fixtures_dir, tmp_path):
    fixture = str(fixtures_dir / "x2_minus_10.json")
    good = run(RunConfig("certify", [fixture, str(fixtures_dir / "lambda_d10.json")],
                         output_path=str(tmp_path / "good.json")))
    assert good == EXIT_OK
    bad_lambda = _write_json(tmp_path / "lam.json", [["1", "0"], ["0", "3"]])
    out = tmp_path / "bad.json"
    assert run(RunConfig("certify", [fixture, bad_lambda], output_path=str(out))) == EXIT_CHECK_FAILED
    assert "not integral" in json.loads(out.read_text(encoding="utf-8"))["errors"]


def test_input_errors_exit_2(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("[[1, 2], [3", encoding="utf-8")
    assert run(RunConfig("psi", [str(broken)])) == EXIT_INPUT_ERROR
    ragged = _write_json(tmp_path / "ragged.json", [["1", "2"], ["3"]])
    assert run(RunConfig("psi", [ragged])) == EXIT_INPUT_ERROR
    assert run(RunConfig("psi", [])) == EXIT_INPUT_ERROR
    assert run(RunConfig("no-such-command")) == EXIT_INPUT_ERROR


def test_kernel_errors_on_user_input_exit_2(tmp_path):
    singular = _write_json(tmp_path / "singular.json", [["1", "2"], ["2", "4"]])
    assert run(RunConfig("psi", [singular])) == EXIT_INPUT_ERROR
    not_magic = _write_json(tmp_path / "square.json", [[1, 0], [1, 1]])
    assert run(RunConfig("magic-decompose", [not_magic])) == EXIT_INPUT_ERROR


def test_config_validation():
    with pytest.raises(InputError):
        RunConfig("psi", tolerance=0)
    with pytest.raises(InputError):
        RunConfig("psi", fmt="xml")


def test_action_list(tmp_path):
    out = tmp_path / "actions.txt"
    assert run(RunConfig("galois-verify", action="list", output_path=str(out))) == EXIT_OK
    text = out.read_text(encoding="utf-8")
    assert "galois-verify --action zero" in text


def test_unknown_action_exits_2():
    assert run(RunConfig("relations", params={"n": 3}, action="nope")) == EXIT_INPUT_ERROR


def test_cli_relations(tmp_path):
    out = tmp_path / "rel.json"
    assert start_app(["relations", "3", "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["expected"] == 1 and len(report["relations"]) == 1


def test_cli_relations_verify(tmp_path):
    out = tmp_path / "verify.json"
    assert start_app(["relations", "--verify", "3", "20", "--seed", "4", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["action"] == "verify"


def test_cli_entropy_bounds(tmp_path):
    out = tmp_path / "entropy.json"
    assert start_app(["entropy-bounds", "3", "1", "0", "-1", "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["haar"] == pytest.approx(4.0)
    assert report["newBound"] == pytest.approx(1.0)
    assert report["elmvBound"] == pytest.approx(0.5)


def test_cli_tolerance_zero_is_an_input_error():
    assert start_app(["relations", "3", "--tolerance", "0"]) == EXIT_INPUT_ERROR


def test_format_follows_output_suffix():
    args = build_parser().parse_args(["psi", "m.json", "--out", "report.csv"])
    config = to_config(args)
    assert config.fmt == "csv"
    assert config.inputs == ["m.json"]
    assert "mode" not in config.params


def test_csv_output_is_byte_identical(tmp_path):
    outputs = []
    for k in range(2):
        out = tmp_path / f"packets{k}.csv"
        argv = ["pgl2-experiment", "--action", "single", "--d", "10", "--identity-trials", "3",
                "--seed", "5", "--out", str(out)]
        assert start_app(argv) == EXIT_OK
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    lines = outputs[0].decode("utf-8").splitlines()
    assert lines[0] == "# torusinv 0.1 seed=5"
    assert lines[1] == "d,classIdx_i,classIdx_j,psiMinus,integralityWitness,inTorus,tauStar"
    assert len(lines) == 2 + 4
