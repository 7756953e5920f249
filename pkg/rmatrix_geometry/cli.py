from __future__ import annotations

import json
import logging
from dataclasses import fields
from typing import Any, Callable, Optional, Sequence

import typer
from rich.console import Console
from rich.logging import RichHandler

from rmatrix_geometry.core.errors import ConfigError, GeometryError
from rmatrix_geometry.core.io.emit_report import (
    emit_report,
    exit_code,
    load_report,
    render_table,
)
from rmatrix_geometry.core.io.load_config import RunConfig, load_config
from rmatrix_geometry.core.model import curves
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.residual import ResidualReport
from rmatrix_geometry.core.numkit.sampling import derive_rng
from rmatrix_geometry.core.verify.suite import DEFAULT_TRIALS, run_all

app = typer.Typer(add_completion=False, no_args_is_help=True)
log = logging.getLogger(__name__)

Sampler = tuple[Callable[..., Any], Callable[[Any, ModelParams], ResidualReport]]

SAMPLERS: dict[str, Sampler] = {
    "e1": (curves.sample_e1, curves.e1_residual),
    "s": (curves.sample_s, curves.surface_s_residual),
    "e2": (curves.sample_e2, curves.e2_residual),
    "cbar": (curves.sample_cbar, curves.cbar_residual),
    "a": (curves.sample_a, curves.surface_a_residual),
    "z": (curves.sample_z, curves.surface_z_residual),
}


@app.callback()
def _callback() -> None:
    """Numerical checks for the q-deformed sl(2|2) R-matrix and its geometry."""
    return


# Options shared by `verify` and `sample`.
QRe = typer.Option(None, "--q-re", help="Re q (default 2)")
QIm = typer.Option(None, "--q-im", help="Im q")
GRe = typer.Option(None, "--g-re", help="Re g (default 3/5); excludes --u-re/--u-im")
GIm = typer.Option(None, "--g-im", help="Im g")
URe = typer.Option(None, "--u-re", help="Re U; g is recovered from U")
UIm = typer.Option(None, "--u-im", help="Im U")
Precision = typer.Option(None, "--precision", help="Working precision: 53|128|256|512 bits")
Tol = typer.Option(None, "--tol", help="Override every check's tolerance")
Seed = typer.Option(None, "--seed", help="Unsigned 64-bit seed")
Trials = typer.Option(None, "--trials", help="Trials per sampled check (default: each minimum)")
Json = typer.Option(False, "--json", help="Emit JSON on stdout")
ConfigPath = typer.Option(None, "--config", help="Config file (.cfg/.conf/.txt, .yaml/.yml, .json)")
Verbose = typer.Option(False, "--verbose", "-v", help="Log to stderr at DEBUG")


def _setup_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    logging.basicConfig(level=level, format="%(message)s", handlers=[handler], force=True)


def _resolve_config(config_path: Optional[str], **options: Any) -> RunConfig:
    groups = options.pop("groups", None)
    if groups:
        options["checks"] = list(groups)
    if not options.get("json"):
        options["json"] = None
    return load_config(config_path, options)


@app.command("verify")
def verify(
    groups: Optional[list[str]] = typer.Argument(
        None, help="Check groups: all|ybe|identities|isogeny|degenerations|genus|invariants|"
        "appendix-b|transfer|maps"
    ),
    q_re: Optional[float] = QRe,
    q_im: Optional[float] = QIm,
    g_re: Optional[float] = GRe,
    g_im: Optional[float] = GIm,
    u_re: Optional[float] = URe,
    u_im: Optional[float] = UIm,
    precision: Optional[int] = Precision,
    tol: Optional[float] = Tol,
    seed: Optional[int] = Seed,
    trials: Optional[int] = Trials,
    epsilon: Optional[int] = typer.Option(
        None, "--epsilon", help="Run the SUBM degeneration checks for this sign only (+1|-1)"
    ),
    json_out: bool = Json,
    config_path: Optional[str] = ConfigPath,
    out: Optional[str] = typer.Option(None, "--out", help="Also write the JSON report here"),
    verbose: bool = Verbose,
    workers: int = typer.Option(1, "--workers", help="Threads for independent trials"),
) -> None:
    """Run check groups and report PASS/FAIL; exit 1 if any check fails."""
    _setup_logging(verbose)
    try:
        config = _resolve_config(
            config_path,
            groups=groups,
            q_re=q_re,
            q_im=q_im,
            g_re=g_re,
            g_im=g_im,
            u_re=u_re,
            u_im=u_im,
            precision=precision,
            tol=tol,
            seed=seed,
            trials=trials,
            epsilon=epsilon,
            json=json_out,
        )
        if workers < 1:
            raise ConfigError(code="E_CONFIG_VALUE", message="workers must be >= 1", path="workers")
        mp = config.params()
    except ConfigError as e:
        _print_errors([e])
        raise typer.Exit(code=2)

    reports = run_all(
        mp,
        seed=config.seed,
        trials=config.trials,
        checks=config.checks,
        workers=workers,
        tol=config.tol,
        epsilon=config.epsilon,
    )
    text, code = emit_report(
        reports, config, fmt="json" if config.json else "text", console=Console(), out=out
    )
    if text is not None:
        typer.echo(text)
    raise typer.Exit(code=code)


@app.command("sample")
def sample(
    kind: str = typer.Argument(..., help="What to sample: e1|s|e2|cbar|a|z"),
    q_re: Optional[float] = QRe,
    q_im: Optional[float] = QIm,
    g_re: Optional[float] = GRe,
    g_im: Optional[float] = GIm,
    u_re: Optional[float] = URe,
    u_im: Optional[float] = UIm,
    precision: Optional[int] = Precision,
    seed: Optional[int] = Seed,
    trials: Optional[int] = Trials,
    json_out: bool = Json,
    config_path: Optional[str] = ConfigPath,
    verbose: bool = Verbose,
) -> None:
    """Print sampled points with their normalized residuals."""
    _setup_logging(verbose)
    try:
        if kind not in SAMPLERS:
            raise ConfigError(
                code="E_SAMPLE_UNKNOWN_KIND",
                message=f"unknown kind: {kind} (choose one of: {', '.join(SAMPLERS)})",
                path="kind",
            )
        config = _resolve_config(
            config_path,
            q_re=q_re,
            q_im=q_im,
            g_re=g_re,
            g_im=g_im,
            u_re=u_re,
            u_im=u_im,
            precision=precision,
            seed=seed,
            trials=trials,
            json=json_out,
        )
        mp = config.params()
    except ConfigError as e:
        _print_errors([e])
        raise typer.Exit(code=2)

    draw, residual = SAMPLERS[kind]
    rows: list[dict[str, Any]] = []
    for index in range(config.trials or DEFAULT_TRIALS):
        rng = derive_rng(config.seed, "sample", kind, index)
        try:
            point = draw(mp, rng)
        except GeometryError as e:
            _print_errors([e])
            raise typer.Exit(code=1)
        report = residual(point, mp)
        rows.append(
            {
                "index": index,
                "point": {f.name: _pair(getattr(point, f.name)) for f in fields(point)},
                "residual": repr(float(report.normalized)),
                "pass": report.passed,
            }
        )

    if config.json:
        typer.echo(json.dumps({"kind": kind, "samples": rows}, indent=2, sort_keys=True))
        return
    for row in rows:
        coords = ", ".join(f"{k}={complex(*v):.12g}" for k, v in row["point"].items())
        typer.echo(f"{kind}[{row['index']}]: {coords}  residual={row['residual']}")


@app.command("report")
def report(path: str = typer.Argument(..., help="Path to a saved JSON report")) -> None:
    """Re-render a saved JSON report as a table; exit 1 if it records failures."""
    try:
        payload = load_report(path)
    except ConfigError as e:
        _print_errors([e])
        raise typer.Exit(code=2)
    render_table(payload, Console())
    raise typer.Exit(code=exit_code(payload))


def _pair(v: Any) -> list[float]:
    c = complex(v)
    return [c.real, c.imag]


def _print_errors(errors: list[GeometryError]) -> None:
    errors_sorted = sorted(errors, key=lambda e: (e.source or "", e.path or "", e.code))
    for e in errors_sorted:
        typer.echo(str(e), err=True)


def parse_args(argv: Sequence[str]) -> RunConfig:
    """RunConfig of a `verify ...` command line, without running it.

    Raises click.UsageError for unknown flags and ConfigError for bad values.
    """
    args = list(argv)
    if not args or args[0] != "verify":
        raise ConfigError(code="E_CLI_USAGE", message="expected a verify command line")
    command = cli.commands["verify"]
    with command.make_context("verify", args[1:]) as ctx:
        params = dict(ctx.params)
    return _resolve_config(
        params["config_path"],
        groups=params["groups"],
        json=params["json_out"],
        **{
            k: params[k]
            for k in (
                "q_re",
                "q_im",
                "g_re",
                "g_im",
                "u_re",
                "u_im",
                "precision",
                "tol",
                "seed",
                "trials",
                "epsilon",
            )
        },
    )


def main() -> None:
    app(prog_name="rmgeo")


cli = typer.main.get_command(app)

if __name__ == "__main__":
    main()
