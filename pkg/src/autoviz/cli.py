"""Command-line entry points: analyze, profile, serve.

Exit codes: 0 success, 1 pipeline error (reported with the same error
codes the HTTP API uses), 2 usage error.
"""

from __future__ import annotations

import errno
import json
import sys
from pathlib import Path

import click

import autoviz
from autoviz import errors
from autoviz.charts import DecisionWeights
from autoviz.config import load_config
from autoviz.ingest import detect_dialect, infer_types, parse_table, profile_columns
from autoviz.pipeline import PipelineOptions, run_pipeline
from autoviz.report import canonical_json


def _fail(exc: errors.AutovizError) -> "click.exceptions.Exit":
    click.echo(f"error [{exc.code}]: {exc.message}", err=True)
    return SystemExit(1)


@click.group()
@click.version_option(autoviz.__version__)
def main():
    """Automated exploratory data analysis."""


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False,
                                              readable=True))
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False), help="Output directory.")
@click.option("--target", default=None, help="Target column for ranking.")
@click.option("--top-charts", default=5, show_default=True, type=int)
@click.option("--scaling/--no-scaling", default=False, show_default=True,
              help="Scale numeric columns after cleaning.")
@click.option("--cap-outliers", is_flag=True, default=False,
              help="Cap flagged outliers to the IQR fences.")
@click.option("--weights", default=None,
              help="Decision-matrix weights as interp,relationship,fit "
                   "(must sum to 1).")
def analyze(input_path, out_dir, target, top_charts, scaling, cap_outliers,
            weights):
    """Run the full pipeline on a CSV/TSV file and write report.json,
    cleaned.csv, and charts/chart_NN.json to the output directory."""
    weight_obj = DecisionWeights()
    if weights is not None:
        try:
            w = [float(v) for v in weights.split(",")]
            weight_obj = DecisionWeights(*w)
        except (ValueError, TypeError) as exc:
            raise click.UsageError(f"bad --weights: {exc}")

    options = PipelineOptions(target=target, top_charts=top_charts,
                              scaling=scaling, cap_outliers=cap_outliers,
                              weights=weight_obj)
    raw = Path(input_path).read_bytes()
    try:
        result = run_pipeline(raw, options)
    except errors.AutovizError as exc:
        raise _fail(exc)

    out = Path(out_dir)
    charts_dir = out / "charts"
    charts_dir.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(result.report_json())
    (out / "cleaned.csv").write_bytes(result.cleaned_csv())
    (out / "timings.json").write_text(json.dumps(
        result.report.timings_ms, sort_keys=True, indent=2) + "\n")
    for i, doc in enumerate(result.chart_documents(), start=1):
        (charts_dir / f"chart_{i:02d}.json").write_text(canonical_json(doc))

    report = result.report
    click.echo(f"rows: {report.row_count}")
    click.echo(f"columns: {len(report.column_names)}")
    click.echo(f"completeness: {report.quality.completeness_before:.3f} -> "
               f"{report.quality.completeness_after:.3f}")
    click.echo(f"outlier flags: {report.quality.outlier_flag_count}")
    if report.charts:
        click.echo("top charts:")
        for spec in report.charts:
            click.echo(f"  {spec.score:.3f}  {spec.title}")
    click.echo(f"report: {out / 'report.json'}")


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False,
                                              readable=True))
def profile(input_path):
    """Print per-column type, completeness, and summary statistics."""
    raw = Path(input_path).read_bytes()
    try:
        dialect = detect_dialect(raw[:65536])
        dataset = infer_types(parse_table(raw, dialect))
    except errors.AutovizError as exc:
        raise _fail(exc)
    profiles = profile_columns(dataset)
    header = (f"{'column':<24} {'type':<12} {'complete':>8} "
              f"{'distinct':>8} {'mean':>12} {'std':>12}")
    click.echo(header)
    click.echo("-" * len(header))
    for p in profiles:
        mean = f"{p.stats.mean:.4g}" if p.stats else ""
        std = f"{p.stats.std:.4g}" if p.stats else ""
        click.echo(f"{p.name:<24.24} {p.type:<12} {p.completeness:>8.3f} "
                   f"{p.distinct_count:>8} {mean:>12} {std:>12}")


@main.command()
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--store-dir", default=None, type=click.Path(file_okay=False))
def serve(host, port, config_path, store_dir):
    """Run the HTTP service until interrupted."""
    import uvicorn
    from dataclasses import replace

    from autoviz.service import create_app

    config = load_config(config_path)
    if host is not None:
        config = replace(config, host=host)
    if port is not None:
        config = replace(config, port=port)
    if store_dir is not None:
        config = replace(config, store_dir=store_dir)

    app = create_app(config)
    try:
        uvicorn.run(app, host=config.host, port=config.port,
                    log_level="info")
    except OSError as exc:
        if exc.errno in (errno.EADDRINUSE, errno.EACCES):
            click.echo(f"error: cannot bind {config.host}:{config.port}: "
                       f"{exc.strerror}", err=True)
            raise SystemExit(1)
        raise
    except SystemExit as exc:
        # uvicorn exits with its own nonzero code when startup fails
        # (e.g. the port is already bound); normalize to exit code 1
        if exc.code not in (0, None):
            click.echo(f"error: cannot bind {config.host}:{config.port}",
                       err=True)
            raise SystemExit(1)
        raise


if __name__ == "__main__":
    sys.exit(main())
