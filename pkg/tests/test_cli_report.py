from typer.testing import CliRunner

from rmatrix_geometry.cli import app

runner = CliRunner()


def test_cli_report_renders_saved_run(tmp_path):
    out = tmp_path / "report.json"
    r = runner.invoke(app, ["verify", "invariants", "--out", str(out), "--json"])
    assert r.exit_code == 0
    r = runner.invoke(app, ["report", str(out)])
    assert r.exit_code == 0
    assert "invariants.surface" in r.stdout
    assert "3/3 passed, 0 failed" in r.stdout


def test_cli_report_records_failures(tmp_path):
    out = tmp_path / "report.json"
    args = ["verify", "identities", "--tol", "1e-30", "--trials", "2", "--out", str(out)]
    runner.invoke(app, args)
    r = runner.invoke(app, ["report", str(out)])
    assert r.exit_code == 1
    assert "FAIL" in r.stdout


def test_cli_report_missing_file(tmp_path):
    r = runner.invoke(app, ["report", str(tmp_path / "nope.json")])
    assert r.exit_code == 2
    assert "E_FILE_NOT_FOUND" in (r.stdout + r.stderr)
