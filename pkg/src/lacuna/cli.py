"""Command-line interface: analyze, theorems, parse, export.

Exit codes: 0 success, 1 check failure, 2 usage or parse error,
3 sequence-evaluation error.  Diagnostics go to stderr; report data goes
to stdout or into --out-dir.  Output is byte-identical for identical
(argv, seed) regardless of LACUNA_THREADS.
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

import click
import jsonschema

from . import dsl
from .analysis import AnalysisConfig, ConvergenceReport, cesaro_means, classify
from .analysis import block_means as compute_block_means
from .analysis import modulus_block_means as compute_modulus_block_means
from .core import EvaluationError, residual_values
from .lacunary import LacunaryPartition
from .modulus import Modulus, identity
from .sequences import Sequence
from .theorems import SUITE_NAMES, standard_suite

REPORT_VERSION = "1"

CONFIG_FIELDS = ("seq", "theta", "modulus", "eps", "tol", "n_max", "M", "T",
                 "window", "out_dir", "format")


def _schema() -> dict:
    text = resources.files("lacuna").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


def _emit_report(config: dict, results) -> None:
    envelope = {"version": REPORT_VERSION, "config": config, "results": results}
    jsonschema.validate(envelope, _schema())
    click.echo(json.dumps(envelope, sort_keys=True, indent=2))


def _fail_usage(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _fail_eval(err: EvaluationError) -> None:
    click.echo(f"error: {err}", err=True)
    sys.exit(3)


def _lower_as(text: str, want: type, what: str):
    try:
        obj = dsl.parse_and_lower(text)
    except (dsl.ParseError, dsl.LoweringError) as exc:
        _fail_usage(f"bad {what} expression: {exc}")
    if not isinstance(obj, want):
        _fail_usage(f"{what} expression must lower to {want.__name__}, "
                    f"got {type(obj).__name__}")
    return obj


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        _fail_usage(f"cannot read config file {path}: {exc}")
    if not isinstance(raw, dict):
        _fail_usage("config file must hold a JSON object")
    unknown = sorted(set(raw) - set(CONFIG_FIELDS))
    if unknown:
        _fail_usage(f"unknown config fields: {unknown}")
    return raw


def _merge(file_cfg: dict, **flags) -> dict:
    """Flags override config-file values; None means the flag was not given."""
    merged = dict(file_cfg)
    for key, val in flags.items():
        if val is not None:
            merged[key] = val
    return merged


def _write_csv(path: Path, rows) -> None:
    lines = ["index,value"]
    for i, v in rows:
        lines.append(f"{i},{v!r}")
    path.write_text("\n".join(lines) + "\n")


@click.group()
@click.version_option(version="0.1.0", prog_name="lacuna")
def cli():
    """Residual-mean analysis of sequences under gcd back-referencing."""


@cli.command()
@click.option("--seq", help="sequence expression, e.g. 'gcdclass(6,1:0.1,2:0.2,3:0.3,6:0.6)'")
@click.option("--theta", help="partition expression, e.g. 'geometric(1,2,8)'")
@click.option("--modulus", "modulus_expr", help="modulus expression (default identity())")
@click.option("--eps", type=float, help="witness threshold for the sup-residual space")
@click.option("--tol", type=float, help="verdict tolerance for mean tails")
@click.option("--n-max", type=int, help="largest witness n scanned")
@click.option("--M", "m_horizon", type=int, help="residual horizon (>= k_R)")
@click.option("--T", "t_horizon", type=int, help="Cesaro horizon (>= k_R)")
@click.option("--window", type=int, help="tail window for verdicts (<= R)")
@click.option("--out-dir", type=click.Path(file_okay=False), help="directory for CSV output")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "both"]),
              default=None, help="what to emit (default json)")
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="JSON config file; flags override its values")
def analyze(seq, theta, modulus_expr, eps, tol, n_max, m_horizon, t_horizon,
            window, out_dir, fmt, config_path):
    """Classify one sequence against all four spaces."""
    cfg = _merge(
        _load_config_file(config_path),
        seq=seq, theta=theta, modulus=modulus_expr, eps=eps, tol=tol,
        n_max=n_max, M=m_horizon, T=t_horizon, window=window,
        out_dir=out_dir, format=fmt,
    )
    if "seq" not in cfg or "theta" not in cfg:
        _fail_usage("--seq and --theta are required (flag or config file)")
    x = _lower_as(cfg["seq"], Sequence, "--seq")
    part = _lower_as(cfg["theta"], LacunaryPartition, "--theta")
    f = _lower_as(cfg.get("modulus", "identity()"), Modulus, "--modulus")

    analysis_cfg = AnalysisConfig(
        eps=cfg.get("eps", 1e-6),
        n_max=cfg.get("n_max", 16),
        M=cfg.get("M", 0),
        T=cfg.get("T", 0),
        tol=cfg.get("tol", 1e-3),
        window=cfg.get("window", 3),
    )
    try:
        report = classify(x, part, f, analysis_cfg)
    except EvaluationError as exc:
        _fail_eval(exc)
    except ValueError as exc:
        _fail_usage(str(exc))

    payload = report.to_json_dict()
    out_fmt = cfg.get("format", "json")
    if out_fmt in ("csv", "both"):
        dest = Path(cfg.get("out_dir", "."))
        dest.mkdir(parents=True, exist_ok=True)
        _write_csv(dest / "tau.csv", enumerate(report.means["tau"], start=1))
        _write_csv(dest / "sigma.csv", enumerate(report.means["sigma"], start=1))
        _write_csv(dest / "tau_f.csv", enumerate(report.means["tau_f"], start=1))
        payload["means_csv_path"] = str(dest)
    if out_fmt in ("json", "both"):
        _emit_report(dict(report.config), payload)


@cli.command()
@click.option("--theta", default="geometric(1,2,8)", show_default=True,
              help="partition expression the battery runs on")
@click.option("--suite", default="all", show_default=True,
              help=f"comma list of {', '.join(SUITE_NAMES)}, or 'all'")
@click.option("--seed", type=int, default=0, show_default=True)
def theorems(theta, suite, seed):
    """Run the deterministic check battery; exit 1 if any check fails."""
    part = _lower_as(theta, LacunaryPartition, "--theta")
    suites = tuple(s.strip() for s in suite.split(",") if s.strip())
    unknown = [s for s in suites if s != "all" and s not in SUITE_NAMES]
    if unknown:
        _fail_usage(f"unknown suite names: {unknown}")
    try:
        results = standard_suite(part, seed=seed, suites=suites)
    except EvaluationError as exc:
        _fail_eval(exc)
    payload = [r.to_json_dict() for r in results]
    _emit_report({"theta": theta, "suite": suite, "seed": seed}, payload)
    if any(r.status == "fail" for r in results):
        sys.exit(1)


@cli.command(name="parse")
@click.option("--expr", required=True, help="expression to parse")
def parse_cmd(expr):
    """Parse an expression and print its tree, or the first failing offset."""
    try:
        ast = dsl.parse(expr)
    except dsl.ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        click.echo("  " + expr, err=True)
        click.echo("  " + " " * exc.position + "^", err=True)
        sys.exit(2)
    click.echo(dsl.pretty(ast))


@cli.command()
@click.option("--seq", required=True)
@click.option("--theta", required=True)
@click.option("--modulus", "modulus_expr", default="identity()", show_default=True)
@click.option("--n", "witness_n", type=int, default=1, show_default=True,
              help="witness n the residuals are taken against")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def export(seq, theta, modulus_expr, witness_n, out_dir):
    """Write residual and mean series as index,value CSV files for plotting."""
    x = _lower_as(seq, Sequence, "--seq")
    part = _lower_as(theta, LacunaryPartition, "--theta")
    f = _lower_as(modulus_expr, Modulus, "--modulus")
    if witness_n < 1:
        _fail_usage("--n must be a positive integer")
    kR = part.points[-1]
    dest = Path(out_dir)
    dest.mkdir(parents=True, exist_ok=True)
    try:
        res = residual_values(x, witness_n, kR)
        tau = compute_block_means(x, part, witness_n).tau
        sigma = cesaro_means(x, witness_n, kR).sigma
        tau_f = compute_modulus_block_means(x, part, f, witness_n).tau
    except EvaluationError as exc:
        _fail_eval(exc)
    written = []
    for name, series in (("residuals", res), ("block_means", tau),
                         ("cesaro_means", sigma), ("modulus_block_means", tau_f)):
        path = dest / f"{name}.csv"
        _write_csv(path, enumerate(series, start=1))
        written.append(str(path))
    for path in written:
        click.echo(f"wrote {path}", err=True)


def main():
    cli()


if __name__ == "__main__":
    main()
