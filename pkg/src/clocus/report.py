"""Serializing scenario reports."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any


def to_json_text(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _kv(label: str, value) -> str:
    return f"{label:<22}{value}"


def to_text(report: dict[str, Any]) -> str:
    lines = [
        _kv("tool", f"{report['tool']} {report['version']}"),
        _kv("mode", report["mode"]),
        _kv("seed", report["seed"]),
        _kv("field", _field_label(report["field"])),
    ]
    if "bounds" in report:
        lines.append(_kv("bounds", f"{report['bounds']['class']} ({report['bounds']['reason']})"))
    if report.get("expected"):
        lines.append(_kv("expected (dim, deg)", f"({report['expected']['dim']}, {report['expected']['deg']})"))
    if report.get("measured"):
        lines.append(_kv("measured (dim, deg)", f"({report['measured']['dim']}, {report['measured']['deg']})"))
    if "structure" in report:
        shape = report["structure"]["N_shape"]
        lines.append(_kv("reduced matrix", f"{shape[0]}x{shape[1]}, {report['structure']['generators']} generators"))
    smooth = report.get("smoothness")
    if smooth:
        if "skipped" in smooth:
            lines.append(_kv("smoothness survey", f"skipped: {smooth['skipped']}"))
        else:
            lines.append(_kv("smoothness survey", f"{len(smooth['singular_points'])} singular of {smooth['points_tested']} points over {_field_label(smooth['field'])}"))
        lines.append(_kv("", smooth["note"]))
    if "error" in report:
        err = report["error"]
        lines.append(_kv("error", f"{err['type']} during {err['stage']}: {err['message']}"))

    checks = report.get("checks", [])
    if checks:
        lines.append("")
        tag_w = max(len(c["tag"]) for c in checks)
        for c in checks:
            status = "PASS" if c["passed"] else "FAIL"
            lines.append(f"{status}  {c['tag']:<{tag_w}}  {c['name']}: {c['detail']}")
    lines.append("")
    lines.append(_kv("verdict", report["verdict"]))
    return "\n".join(lines) + "\n"


def _field_label(doc: dict) -> str:
    return f"GF({doc['modulus']})" if doc.get("kind") == "prime" else "QQ"


def render(report: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return to_json_text(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown report format {fmt!r}")


def write_report(report: dict[str, Any], fmt: str, path: str | Path | None) -> str:
    text = render(report, fmt)
    if path is not None:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    return text
