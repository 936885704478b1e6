"""Serialization of reports and coefficient tables (JSON and CSV).

Canonical bodies are byte-deterministic: keys are sorted, rationals are
``num/den`` strings and nothing time-dependent is included. Wall-clock data
goes to a sidecar file next to the output.
"""
from __future__ import annotations

import csv
import io
import json

from .kernel import fmt

SCHEMA = "mops-report/1"
TABLE_SCHEMA = "mops-table/1"
REPORT_FIELDS = ("section", "identity", "max_residual", "budget", "verdict")
VERDICTS = ("pass", "fail", "skipped")


def report_rows(reports):
    rows = []
    for rep in reports:
        for c in rep:
            d = c.as_dict()
            d["section"] = rep.title
            rows.append(d)
    return rows


def report_document(reports, config_echo):
    return {"schema": SCHEMA, "config-echo": config_echo, "sections": report_rows(reports)}


def dumps_report(reports, config_echo, fmt_name="json") -> str:
    doc = report_document(reports, config_echo)
    if fmt_name == "json":
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_FIELDS)
    for r in doc["sections"]:
        w.writerow([r[k] for k in REPORT_FIELDS])
    return buf.getvalue()


def validate_report(doc) -> list[str]:
    """Schema problems of a parsed JSON report (empty when valid)."""
    errs = []
    if not isinstance(doc, dict):
        return ["report is not an object"]
    if doc.get("schema") != SCHEMA:
        errs.append(f"schema must be {SCHEMA!r}")
    if not isinstance(doc.get("config-echo"), dict):
        errs.append("config-echo must be an object")
    secs = doc.get("sections")
    if not isinstance(secs, list):
        return errs + ["sections must be a list"]
    for i, s in enumerate(secs):
        for k in REPORT_FIELDS:
            if not isinstance(s.get(k), str):
                errs.append(f"sections[{i}].{k} must be a string")
        if s.get("verdict") not in VERDICTS:
            errs.append(f"sections[{i}].verdict must be one of {VERDICTS}")
        for k in ("max_residual", "budget"):
            v = s.get(k, "")
            num, _, den = v.partition("/")
            if not num.lstrip("-").isdigit() or (den and not den.isdigit()):
                errs.append(f"sections[{i}].{k} is not a rational string")
    return errs


def dumps_table(table, config_echo, fmt_name="csv") -> str:
    rows = [[fmt(x) if not isinstance(x, int) else str(x) for x in r] for r in table.rows]
    if fmt_name == "json":
        doc = {
            "schema": TABLE_SCHEMA,
            "config-echo": config_echo,
            "columns": list(table.columns),
            "rows": rows,
            "verdicts": {name: ("pass" if ok else "fail") for name, ok in table.verdicts},
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    w.writerows(rows)
    return buf.getvalue()


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def write_text(path, text):
    if path is None or path == "-":
        import sys
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_sidecar(path, meta):
    """``<path>.meta.json`` with run metadata that is kept out of the canonical body."""
    if path is None or path == "-":
        return
    with open(f"{path}.meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, indent=1)
        fh.write("\n")


__all__ = ["SCHEMA", "TABLE_SCHEMA", "report_rows", "report_document", "dumps_report",
           "validate_report", "dumps_table", "read_csv", "write_text", "write_sidecar"]
