import json
import math

from rich.console import Console

from rmatrix_geometry.core.errors import ConfigError
from rmatrix_geometry.core.io.emit_report import (
    build_payload,
    decimal_string,
    emit_report,
    exit_code,
    load_report,
    to_json,
)
from rmatrix_geometry.core.io.load_config import RunConfig
from rmatrix_geometry.core.verify.report import CheckReport

PARTIAL = '{"reports": [{"name": "x"}], "summary": {}}'


def _reports():
    return [
        CheckReport.build("ybe.rational", [1e-14, 3e-15], 1e-10, metadata={"selected": None}),
        CheckReport.build(
            "maps.form_equivalence",
            [2e-12],
            1e-9,
            metadata={"variants": {"plain": 2e-12, "shifted": 0.4}, "selected": "plain"},
        ),
        CheckReport.flag("invariants.product", False, metadata={"genera": (5, 5), "z": 1 + 2j}),
    ]


def test_payload_shape():
    payload = build_payload(_reports(), RunConfig(seed=3))
    assert set(payload) == {"version", "tool", "tool_version", "config", "reports", "summary"}
    assert payload["tool"] == "rmgeo"
    assert payload["config"]["seed"] == 3
    assert payload["config"]["checks"] == ["all"]
    assert [r["name"] for r in payload["reports"]] == [
        "invariants.product",
        "maps.form_equivalence",
        "ybe.rational",
    ]
    assert payload["summary"] == {"total": 3, "passed": 2, "failed": 1}
    item = payload["reports"][2]
    assert set(item) == {"name", "pass", "max_residual", "tolerance", "degenerate", "metadata"}
    assert item["max_residual"] == "1e-14"
    assert float(item["tolerance"]) == 1e-10
    meta = payload["reports"][0]["metadata"]
    assert meta["genera"] == [5, 5]
    assert meta["z"] == [1.0, 2.0]


def test_payload_is_json():
    payload = build_payload(_reports(), None)
    assert payload["config"] is None
    assert json.loads(to_json(payload)) == payload


def test_decimal_strings():
    assert decimal_string(0.1) == "0.1"
    assert float(decimal_string(1 / 3)) == 1 / 3
    assert decimal_string(math.inf) == "inf"
    assert decimal_string(-math.inf) == "-inf"
    assert decimal_string(math.nan) == "nan"


def test_exit_code():
    assert exit_code(build_payload(_reports(), None)) == 1
    assert exit_code(build_payload(_reports()[:2], None)) == 0
    assert exit_code(build_payload([], None)) == 0


def test_emit_report_text_and_json():
    console = Console(record=True, width=160)
    text, code = emit_report(_reports(), None, console=console)
    assert text is None and code == 1
    out = console.export_text()
    assert "PASS" in out and "FAIL" in out
    assert "reading=plain" in out
    assert "2/3 passed, 1 failed" in out

    text, code = emit_report(_reports()[:2], None, fmt="json")
    assert code == 0
    assert json.loads(text)["summary"]["failed"] == 0


def test_emit_report_writes_out_file(tmp_path):
    p = tmp_path / "run.json"
    text, code = emit_report(_reports(), None, fmt="json", out=p)
    assert code == 1
    assert load_report(p) == json.loads(text)


def test_load_report_round_trip(tmp_path):
    p = tmp_path / "report.json"
    p.write_text(to_json(build_payload(_reports(), None)), encoding="utf-8")
    payload = load_report(p)
    assert payload["summary"]["total"] == 3


def test_load_report_errors(tmp_path):
    cases = [
        (tmp_path / "missing.json", None, "E_FILE_NOT_FOUND"),
        (tmp_path / "broken.json", "{", "E_JSON_PARSE"),
        (tmp_path / "list.json", "[]", "E_REPORT_SHAPE"),
        (tmp_path / "partial.json", PARTIAL, "E_REPORT_SHAPE"),
    ]
    for path, text, code in cases:
        if text is not None:
            path.write_text(text, encoding="utf-8")
        try:
            load_report(path)
            assert False, f"expected ConfigError {code}"
        except ConfigError as e:
            assert e.code == code
