import json

from typer.testing import CliRunner

from rmatrix_geometry.cli import app

runner = CliRunner()


def test_cli_verify_invariants_json():
    r = runner.invoke(app, ["verify", "invariants", "--json", "--seed", "3"])
    assert r.exit_code == 0, r.stdout
    payload = json.loads(r.stdout)
    assert payload["summary"] == {"total": 3, "passed": 3, "failed": 0}
    assert payload["config"]["seed"] == 3
    assert payload["config"]["checks"] == ["invariants"]
    assert {item["name"] for item in payload["reports"]} == {
        "invariants.product",
        "invariants.severi",
        "invariants.surface",
    }


def test_cli_verify_table():
    r = runner.invoke(app, ["verify", "invariants"])
    assert r.exit_code == 0
    assert "PASS" in r.stdout
    assert "3/3 passed, 0 failed" in r.stdout


def test_cli_verify_tight_tolerance_fails():
    r = runner.invoke(app, ["verify", "identities", "--tol", "1e-30", "--trials", "2", "--json"])
    assert r.exit_code == 1
    payload = json.loads(r.stdout)
    assert payload["summary"]["failed"] >= 1


def test_cli_verify_rejects_u_with_g():
    r = runner.invoke(app, ["verify", "ybe", "--u-re", "1", "--g-re", "0.5"])
    assert r.exit_code == 2
    assert "E_CONFIG_EXCLUSIVE" in (r.stdout + r.stderr)


def test_cli_verify_rejects_unknown_group():
    r = runner.invoke(app, ["verify", "everything"])
    assert r.exit_code == 2
    assert "E_CONFIG_UNKNOWN_CHECK" in (r.stdout + r.stderr)


def test_cli_verify_unknown_option():
    r = runner.invoke(app, ["verify", "ybe", "--bogus"])
    assert r.exit_code == 2


def test_cli_verify_writes_report(tmp_path):
    out = tmp_path / "report.json"
    r = runner.invoke(app, ["verify", "invariants", "--out", str(out)])
    assert r.exit_code == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["tool"] == "rmgeo"
    assert payload["summary"]["passed"] == 3


def test_cli_verify_config_file(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text("checks: [invariants]\nseed: 11\n", encoding="utf-8")
    r = runner.invoke(app, ["verify", "--config", str(p), "--json"])
    assert r.exit_code == 0
    assert json.loads(r.stdout)["config"]["seed"] == 11


def test_cli_verify_shipped_u_config():
    r = runner.invoke(app, ["verify", "--config", "configs/u-coupling-eps-minus.json", "--json"])
    assert r.exit_code == 0, r.stdout + r.stderr
    payload = json.loads(r.stdout)
    names = {item["name"] for item in payload["reports"]}
    assert "degenerations.cbar_component[eps=-1]" in names
    assert not any("eps=+1" in n for n in names)
