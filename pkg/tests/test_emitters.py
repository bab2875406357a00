import csv
import io
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pytest

from app.core.emitters import emit, emit_csv, emit_json, emit_text


@dataclass
class Report:
    ok: bool = True
    rows: List[Dict] = field(default_factory=list)
    errors: Optional[str] = None
    csv_columns: Optional[List[str]] = None

    def to_dict(self):
        return {"tool": "psi", "ok": self.ok, "action": "values", "n": 2, "rows": self.rows,
                "errors": self.errors, "notes": ["two values"]}


ROWS = [{"sigma": "()", "value": "-2/1", "agree": True}, {"sigma": "(1 2)", "value": "3/1", "agree": False}]


def test_json_is_sorted_and_stable():
    text = emit(Report(rows=ROWS), "json", seed=0)
    assert json.loads(text)["rows"][1]["value"] == "3/1"
    assert text == emit_json(Report(rows=ROWS).to_dict())
    assert text.index('"action"') < text.index('"tool"')


def test_csv_header_and_cells():
    text = emit_csv(Report(rows=ROWS).to_dict(), seed=7)
    lines = text.splitlines()
    assert lines[0] == "# torusinv 0.1 seed=7"
    table = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    assert table[0] == ["sigma", "value", "agree"]
    assert table[1] == ["()", "-2/1", "true"]
    assert table[2] == ["(1 2)", "3/1", "false"]


def test_csv_respects_preferred_columns():
    text = emit(Report(rows=ROWS, csv_columns=["value"]), "csv", seed=0)
    assert text.splitlines()[1:] == ["value", "-2/1", "3/1"]


def test_csv_without_rows_falls_back_to_scalars():
    text = emit_csv(Report().to_dict(), seed=0)
    header = text.splitlines()[1].split(",")
    assert "n" in header and "rows" not in header


def test_text_report():
    text = emit_text(Report(ok=False, rows=ROWS, errors="bad sigma").to_dict(), seed=0)
    assert text.startswith("psi [values]: FAILED")
    assert "errors: bad sigma" in text
    assert "note: two values" in text
    assert "(1 2)" in text


def test_acceptance_uses_its_template():
    data = {"tool": "acceptance", "ok": True, "passed": 1,
            "rows": [{"criterion": 5, "name": "rank obstruction", "ok": True, "detail": "N_1 = 5"}]}
    text = emit_text(data, seed=3)
    assert text.splitlines()[0] == "torusinv 0.1 (seed 3)"
    assert "[PASS]  5  rank obstruction" in text
    assert text.rstrip().endswith("1/1 criteria passed")


def test_unknown_format():
    with pytest.raises(ValueError):
        emit(Report(), "xml", seed=0)
