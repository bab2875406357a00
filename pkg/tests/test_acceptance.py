import pytest

import features.acceptance.v1_0.acceptance as acceptance
from app.core.runner import EXIT_CHECK_FAILED, EXIT_OK, RunConfig, run


def test_filter_by_key_and_number():
    assert [r.key for r in acceptance.acceptance_suite("rank").rows] == ["rank"]
    assert [r.criterion for r in acceptance.acceptance_suite("2").rows] == [2]
    assert [r.key for r in acceptance.acceptance_suite("zero").rows] == ["zero-propagation"]


def test_rank_and_entropy_pass():
    result = acceptance.acceptance_suite("rank")
    assert result.ok and result.passed == 1
    assert acceptance.acceptance_suite("entropy").ok


def test_empty_selection_is_not_a_pass():
    result = acceptance.acceptance_suite("nothing-matches")
    assert not result.ok
    assert result.rows == []
    assert "selects no criterion" in result.errors


def test_broken_generator_fails_leibniz(monkeypatch, tmp_path):
    real_psi0 = acceptance.psi0
    monkeypatch.setattr(acceptance, "psi0", lambda s, g: -real_psi0(s, g))
    result = acceptance.acceptance_suite("leibniz", scale=0.01)
    assert not result.ok
    assert "Psi0" in result.rows[0].detail

    out = tmp_path / "acceptance.txt"
    code = run(RunConfig("acceptance", params={"filter": "leibniz", "scale": 0.01}, output_path=str(out)))
    assert code == EXIT_CHECK_FAILED
    assert "[FAIL]  1" in out.read_text(encoding="utf-8")


def test_raising_criterion_is_reported(monkeypatch):
    def explode(seed, scale):
        raise RuntimeError("boom")

    criteria = [(5, "rank", "Rank obstruction", explode)]
    monkeypatch.setattr(acceptance, "CRITERIA", criteria)
    result = acceptance.acceptance_suite()
    assert not result.ok
    assert result.rows[0].detail == "RuntimeError: boom"


@pytest.mark.slow
def test_full_suite_at_reduced_scale(tmp_path):
    out = tmp_path / "acceptance.txt"
    code = run(RunConfig("acceptance", params={"scale": 0.05}, output_path=str(out)))
    text = out.read_text(encoding="utf-8")
    assert code == EXIT_OK, text
    assert text.rstrip().endswith("10/10 criteria passed")
    assert text.count("[PASS]") == 10
