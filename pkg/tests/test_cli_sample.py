import json

from typer.testing import CliRunner

from rmatrix_geometry.cli import app

runner = CliRunner()


def test_cli_sample_e1_text():
    r = runner.invoke(app, ["sample", "e1", "--trials", "3", "--seed", "1"])
    assert r.exit_code == 0, r.stdout
    lines = [line for line in r.stdout.splitlines() if line.strip()]
    assert len(lines) == 3
    assert lines[0].startswith("e1[0]: ")
    assert all("residual=" in line for line in lines)


def test_cli_sample_json_is_deterministic():
    args = ["sample", "cbar", "--trials", "2", "--seed", "5", "--json"]
    first = runner.invoke(app, args)
    second = runner.invoke(app, args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    payload = json.loads(first.stdout)
    assert payload["kind"] == "cbar"
    assert len(payload["samples"]) == 2
    assert all(s["pass"] for s in payload["samples"])


def test_cli_sample_every_kind():
    for kind in ("e1", "s", "e2", "cbar", "a", "z"):
        r = runner.invoke(app, ["sample", kind, "--trials", "1", "--json"])
        assert r.exit_code == 0, (kind, r.stdout)
        assert json.loads(r.stdout)["samples"][0]["pass"], kind


def test_cli_sample_unknown_kind():
    r = runner.invoke(app, ["sample", "e7"])
    assert r.exit_code == 2
    assert "E_SAMPLE_UNKNOWN_KIND" in (r.stdout + r.stderr)
