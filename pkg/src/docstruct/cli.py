"""Command-line front end: ``docstruct analyze|extract|score|chart|gen``.

Exit status 0 on success, 2 for usage or input problems, 1 for anything
unexpected.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import chart as chart_mod
from .extraction import NoDetailLevelError, records_to_csv, records_to_jsonl
from .pipeline import (
    RunConfig,
    analyze,
    read_document,
    run_extraction,
    series_csv,
    templates_json,
    write_atomic,
)
from .scoring import COLUMN_NAMES, ROW_NAMES, compare_lines, event_counts, vary_element

INPUT_ERRORS = (ValueError, OSError, KeyError, json.JSONDecodeError)


def _guard(fn):
    """Map exceptions to the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except click.ClickException:
            raise
        except INPUT_ERRORS as e:
            msg = e.strerror if isinstance(e, OSError) and e.strerror else str(e)
            click.echo(f"error: {msg}", err=True)
            sys.exit(2)
        except Exception as e:  # noqa: BLE001 - last-resort handler
            click.echo(f"internal error: {type(e).__name__}: {e}", err=True)
            sys.exit(1)

    return wrapper


def _run_options(fn):
    opts = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False),
                     help="key = value file; flags override it."),
        click.option("--sample-lines", type=int, help="Lines used for template detection."),
        click.option("--min-similarity", type=float, help="Score floor for joining a template."),
        click.option("--no-adaptive", is_flag=True, default=None,
                     help="Keep the full score map while clustering."),
        click.option("--score-map", type=click.Path(dir_okay=False),
                     help="3x5 score map file."),
        click.option("--out-dir", type=click.Path(file_okay=False), help="Artifact directory."),
        click.option("--emit-series", is_flag=True, default=None, help="Also write series.csv."),
        click.option("--emit-svg", is_flag=True, default=None,
                     help="Also write chart.svg of the series."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _config(config_path, no_adaptive=None, **flags) -> RunConfig:
    base = RunConfig.from_file(config_path) if config_path else RunConfig()
    return base.with_overrides(adaptive=False if no_adaptive else None, **flags)


def _series_svg(analysis) -> str:
    pts = [(float(ln), float(t)) for ln, t in analysis.series]
    return chart_mod.svg_chart(pts, "line", "template id", "template series")


def _write_common(analysis, cfg: RunConfig, series: bool):
    out = Path(cfg.out_dir)
    if series or cfg.emit_series:
        write_atomic(out / "series.csv", series_csv(analysis.series))
    if cfg.emit_svg:
        write_atomic(out / "chart.svg", _series_svg(analysis))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Discover the line-format structure of a report and extract its records."""


@main.command("analyze")
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@_run_options
@_guard
def cmd_analyze(input_path, config_path, **flags):
    """Detect templates and hierarchy; print the structure string.

    Writes dss.txt, templates.json and series.csv into --out-dir.
    """
    cfg = _config(config_path, **flags)
    analysis = analyze(read_document(input_path), cfg)
    out = Path(cfg.out_dir)
    write_atomic(out / "dss.txt", analysis.dss + "\n")
    try:
        plan, _ = run_extraction(analysis)
    except NoDetailLevelError:
        plan = None
    write_atomic(out / "templates.json", templates_json(analysis, plan))
    _write_common(analysis, cfg, series=True)
    click.echo(analysis.dss)


@main.command("extract")
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@_run_options
@click.option("--format", "format", type=click.Choice(["csv", "jsonl"]), default=None,
              help="Records file format.")
@_guard
def cmd_extract(input_path, config_path, **flags):
    """Run the full pipeline and write records.csv or records.jsonl."""
    cfg = _config(config_path, **flags)
    analysis = analyze(read_document(input_path), cfg)
    _, ex = run_extraction(analysis)
    out = Path(cfg.out_dir)
    if cfg.format == "jsonl":
        path = write_atomic(out / "records.jsonl", records_to_jsonl(ex))
    else:
        path = write_atomic(out / "records.csv", records_to_csv(ex))
    _write_common(analysis, cfg, series=False)
    click.echo(
        f"{len(ex)} records -> {path}; skipped {ex.skipped} unmatched lines, "
        f"{ex.incomplete} incomplete records",
        err=True,
    )


def _pick_lines(line_a, line_b, file, numbers):
    if file is None:
        if numbers is not None:
            raise click.UsageError("--lines needs --file")
        if line_a is None or line_b is None:
            raise click.UsageError("give two lines, or --file with --lines A,B")
        return line_a, line_b
    if numbers is None:
        raise click.UsageError("--file needs --lines A,B")
    try:
        a, b = (int(x) for x in numbers.split(","))
    except ValueError:
        raise click.UsageError("--lines expects two comma-separated numbers") from None
    doc = read_document(file)
    for n in (a, b):
        if not 1 <= n <= len(doc):
            raise click.UsageError(f"line {n} is outside 1..{len(doc)}")
    return doc[a - 1], doc[b - 1]


@main.command("score")
@click.argument("line_a", required=False)
@click.argument("line_b", required=False)
@click.option("--file", type=click.Path(exists=True, dir_okay=False), help="Take lines from a file.")
@click.option("--lines", "numbers", help="1-based line numbers A,B within --file.")
@click.option("--score-map", type=click.Path(exists=True, dir_okay=False), help="3x5 score map file.")
@_guard
def cmd_score(line_a, line_b, file, numbers, score_map):
    """Score two lines and show how each map element moves the score."""
    a, b = _pick_lines(line_a, line_b, file, numbers)
    m = RunConfig(score_map=score_map).score_matrix()
    counts, _ = event_counts(a, b)
    click.echo(f"score: {compare_lines(a, b, m):.2f}")
    click.echo(f"{'row':<8} {'column':<17} {'events':>6} {'min':>8} {'max':>8}  influence")
    lo_all, hi_all = np.inf, -np.inf
    for r in range(3):
        for c in range(5):
            seq = vary_element(a, b, m, r, c)
            lo, hi = min(seq), max(seq)
            lo_all, hi_all = min(lo_all, lo), max(hi_all, hi)
            mark = "influential" if counts[r, c] > 0 else "-"
            click.echo(
                f"{ROW_NAMES[r]:<8} {COLUMN_NAMES[c]:<17} {int(counts[r, c]):>6} "
                f"{lo:>8.2f} {hi:>8.2f}  {mark}"
            )
    click.echo(f"variation range: {lo_all:.2f} - {hi_all:.2f}")


@main.command("chart")
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default="chart.svg",
              show_default=True)
@click.option("--title", default="")
@_guard
def cmd_chart(csv_path, out_path, title):
    """Render a two-column CSV (series or scores) as an SVG chart."""
    pts, (xl, yl) = chart_mod.read_points(Path(csv_path).read_text())
    write_atomic(out_path, chart_mod.svg_chart(pts, xl, yl, title))
    click.echo(f"{len(pts)} points -> {out_path}", err=True)


@main.command("gen")
@click.option("--spec", "spec_name", default="figure3", show_default=True,
              help="'figure3', 'random', or a JSON spec file.")
@click.option("--lines", "n_lines", type=int, default=None,
              help="figure3: truncate to N lines; otherwise minimum length.")
@click.option("--seed", type=int, default=None, help="Random seed.")
@click.option("--depth", type=click.IntRange(1, 4), default=None, help="Levels for --spec random.")
@click.option("--noise/--no-noise", default=None, help="Noise block for --spec random.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--truth", "truth_path", type=click.Path(dir_okay=False), default=None)
@_guard
def cmd_gen(spec_name, n_lines, seed, depth, noise, out_path, truth_path):
    """Generate a synthetic document (and its ground truth)."""
    from .testkit import StructureSpec, figure3_document, gen_document, random_spec

    if spec_name == "figure3":
        lines, truth = figure3_document(3 if seed is None else seed)
        if n_lines is not None:
            lines = lines[:n_lines]
            truth["series"] = truth["series"][:n_lines]
            truth["records"] = [r for r in truth["records"] if r["lines"][-1] <= n_lines]
            truth["page_starts"] = [p for p in truth["page_starts"] if p <= n_lines]
        truth_doc = truth
    else:
        if spec_name == "random":
            spec = random_spec(0 if seed is None else seed, depth=depth, noise=noise)
        else:
            spec = StructureSpec.from_dict(json.loads(Path(spec_name).read_text()))
            if seed is not None:
                spec.seed = seed
        lines, truth = gen_document(spec, n_lines)
        truth_doc = truth.to_dict()
        truth_doc["spec"] = spec.to_dict()
    write_atomic(out_path, "".join(s + "\n" for s in lines))
    if truth_path:
        write_atomic(truth_path, json.dumps(truth_doc, indent=2) + "\n")
    click.echo(f"{len(lines)} lines -> {out_path}", err=True)


if __name__ == "__main__":  # pragma: no cover
    main()
