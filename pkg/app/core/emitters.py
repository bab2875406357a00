"""
Report emitters. Every feature result exposes ``to_dict()``; its ``rows`` entry (a list of
flat dicts) is what the CSV and table views show. Output is a pure function of the result,
so identical inputs and seed give byte-identical reports.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Dict, List, Optional, Sequence

import app_constants
from app.ui.report_templates import REPORT_TEMPLATE, TEMPLATES

FORMATS = ("json", "csv", "text")


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def _columns(rows: Sequence[Dict], preferred: Optional[Sequence[str]] = None) -> List[str]:
    if preferred:
        return list(preferred)
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


def _table(data: Dict) -> List[Dict]:
    rows = data.get("rows")
    if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
        return rows
    return [{k: v for k, v in data.items() if not isinstance(v, (list, dict))}]


def emit_json(data: Dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def emit_csv(data: Dict, seed: int, columns: Optional[Sequence[str]] = None) -> str:
    rows = _table(data)
    columns = _columns(rows, columns)
    buf = io.StringIO()
    buf.write(f"# {app_constants.APP_NAME} {app_constants.APP_VERSION} seed={seed}\n")
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def emit_text(data: Dict, seed: int, columns: Optional[Sequence[str]] = None) -> str:
    tool = data.get("tool", app_constants.APP_NAME)
    template = TEMPLATES.get(tool)
    if template is not None:
        return template.render(title=app_constants.APP_NAME, version=app_constants.APP_VERSION, seed=seed, report=data)

    rows = data.get("rows") if isinstance(data.get("rows"), list) else []
    rows = [{k: _cell(v) for k, v in r.items()} for r in rows if isinstance(r, dict)]
    cols = _columns(rows, columns)
    widths = {c: max([len(c)] + [len(r.get(c, "")) for r in rows]) for c in cols}
    skip = {"tool", "ok", "action", "errors", "notes", "rows"}
    fields = [(k, _cell(v)) for k, v in sorted(data.items()) if k not in skip]
    return REPORT_TEMPLATE.render(
        title=tool,
        action=data.get("action"),
        ok=data.get("ok", True),
        fields=fields,
        errors=data.get("errors"),
        notes=data.get("notes") or [],
        columns=cols,
        rows=rows,
        widths=widths,
    )


def emit(result, fmt: str, seed: int) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    data = result.to_dict()
    columns = getattr(result, "csv_columns", None)
    if fmt == "json":
        return emit_json(data)
    if fmt == "csv":
        return emit_csv(data, seed, columns)
    return emit_text(data, seed, columns)
