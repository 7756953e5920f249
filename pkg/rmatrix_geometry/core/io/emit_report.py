from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np
from rich.console import Console
from rich.table import Table

from rmatrix_geometry import __version__
from rmatrix_geometry.core.errors import ConfigError
from rmatrix_geometry.core.io.load_config import RunConfig
from rmatrix_geometry.core.verify.report import CheckReport

REPORT_VERSION = "1"


def decimal_string(value: float) -> str:
    """Shortest round-tripping decimal form; inf and nan spelled out."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(float(value))


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in items]
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else decimal_string(value)
    if isinstance(value, complex):
        return [_jsonable(value.real), _jsonable(value.imag)]
    try:
        c = complex(value)
    except (TypeError, ValueError):
        return str(value)
    return [_jsonable(c.real), _jsonable(c.imag)] if c.imag else _jsonable(c.real)


def report_item(report: CheckReport) -> dict[str, Any]:
    return {
        "name": report.name,
        "pass": report.passed,
        "max_residual": decimal_string(report.max_residual),
        "tolerance": decimal_string(report.tolerance),
        "degenerate": report.degenerate,
        "metadata": _jsonable(report.metadata),
    }


def build_payload(reports: Sequence[CheckReport], config: RunConfig | None) -> dict[str, Any]:
    passed = sum(1 for r in reports if r.passed)
    return {
        "version": REPORT_VERSION,
        "tool": "rmgeo",
        "tool_version": __version__,
        "config": None if config is None else _jsonable(config.to_dict()),
        "reports": [report_item(r) for r in sorted(reports, key=lambda r: r.name)],
        "summary": {"total": len(reports), "passed": passed, "failed": len(reports) - passed},
    }


def to_json(payload: Mapping[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def exit_code(payload: Mapping[str, Any]) -> int:
    return 0 if payload["summary"]["failed"] == 0 else 1


def render_table(payload: Mapping[str, Any], console: Console) -> None:
    """Aligned PASS/FAIL table followed by the summary line."""
    table = Table(title=f"rmgeo report v{payload.get('version', '?')}")
    table.add_column("Check")
    table.add_column("Result")
    table.add_column("Max residual", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Note")
    for item in payload["reports"]:
        table.add_row(
            item["name"],
            "PASS" if item["pass"] else "FAIL",
            item["max_residual"],
            item["tolerance"],
            _note(item),
        )
    console.print(table)
    s = payload["summary"]
    console.print(f"{s['passed']}/{s['total']} passed, {s['failed']} failed")


def _note(item: Mapping[str, Any]) -> str:
    meta = item.get("metadata") or {}
    notes: list[str] = []
    if item.get("degenerate"):
        notes.append("degenerate")
    if "error" in meta:
        notes.append(str(meta["error"].get("code")))
    if meta.get("selected"):
        notes.append(f"reading={meta['selected']}")
    if meta.get("dropped_trials"):
        notes.append(f"dropped={meta['dropped_trials']}")
    return ", ".join(notes)


def emit_report(
    reports: Sequence[CheckReport],
    config: RunConfig | None,
    *,
    fmt: str = "text",
    console: Console | None = None,
    out: str | Path | None = None,
) -> tuple[str | None, int]:
    """(JSON text or None, exit code). Text output goes to `console`.

    With `out` the JSON report is also written there.
    """
    payload = build_payload(reports, config)
    if out is not None:
        Path(out).write_text(to_json(payload) + "\n", encoding="utf-8")
    if fmt == "json":
        return to_json(payload), exit_code(payload)
    render_table(payload, console or Console())
    return None, exit_code(payload)


def load_report(path: str | Path) -> dict[str, Any]:
    p = Path(path)
    if not p.exists():
        raise ConfigError(code="E_FILE_NOT_FOUND", message="file does not exist", source=str(p))
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except Exception as e:
        raise ConfigError(code="E_JSON_PARSE", message=str(e), source=str(p)) from e
    if not isinstance(data, dict) or not _has_shape(data):
        raise ConfigError(
            code="E_REPORT_SHAPE",
            message="expected an object with reports and summary",
            source=str(p),
        )
    return data


def _has_shape(data: Mapping[str, Any]) -> bool:
    reports = data.get("reports")
    summary = data.get("summary")
    if not isinstance(reports, list) or not isinstance(summary, dict):
        return False
    keys: Iterable[str] = ("total", "passed", "failed")
    return all(isinstance(summary.get(k), int) for k in keys) and all(
        isinstance(r, dict) and {"name", "pass", "max_residual", "tolerance"} <= r.keys()
        for r in reports
    )
