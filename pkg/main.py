"""Command-line entry point: classify datasets, benchmark the routes, generate instances."""

import logging
import sys
from dataclasses import dataclass, field

import click

from bench import BenchConfig, parse_range, render_bench, run_bench
from dea.classify import (
    FullClassification,
    OrientedClass,
    classify_all_rdse_pareto,
    classify_all_unified,
    classify_three_pass,
    cross_validate,
)
from dea.report import ORIENTATIONS, REPORT_FORMATS, render_report
from util.constants import EXAMPLES
from util.core import ToleranceConfig
from util.data_loader import load_csv, load_example, write_csv
from util.sampling import random_dataset

logger = logging.getLogger(__name__)

METHODS = ("unified", "rdse", "both")

EXIT_OK, EXIT_DISAGREE, EXIT_ERROR = 0, 1, 2


@dataclass(frozen=True)
class CliConfig:
    input: str | None = None
    example: str | None = None
    fmt: str = "markdown"
    method: str = "unified"
    orientation: str = "all"
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    workers: int | None = None

    def __post_init__(self):
        if (self.input is None) == (self.example is None):
            raise ValueError("Give exactly one of a dataset file or --example.")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {', '.join(METHODS)}.")


def _setup_logging(verbose: int):
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True
    )


def _rdse_classifications(ds, tolerances) -> list[FullClassification]:
    if ds.nonnegative:
        return classify_three_pass(ds, tolerances)[0]
    labels, _ = classify_all_rdse_pareto(ds, tolerances)
    na = OrientedClass.NOT_APPLICABLE
    return [FullClassification(o, ds.names[o], p, na, na) for o, p in enumerate(labels)]


def run_classify(cfg: CliConfig) -> int:
    """Classify the dataset named by cfg and echo the report. Returns the exit code."""
    ds = load_example(cfg.example) if cfg.example else load_csv(cfg.input)
    logger.info("Loaded %d units (m=%d, s=%d)", ds.n, ds.m, ds.s)
    report = None
    if cfg.method == "unified":
        classifications = classify_all_unified(ds, cfg.tolerances, workers=cfg.workers)
    elif cfg.method == "rdse":
        classifications = _rdse_classifications(ds, cfg.tolerances)
    else:
        report = cross_validate(ds, cfg.tolerances, workers=cfg.workers)
        classifications = list(report.classifications)
    click.echo(render_report(classifications, ds, cfg.fmt, cfg.orientation, report), nl=False)
    if report is not None and not report.passed:
        return EXIT_DISAGREE
    return EXIT_OK


def _fail(exc: Exception):
    click.echo(f"Error: {exc}", err=True)
    sys.exit(EXIT_ERROR)


verbose_option = click.option("-v", "--verbose", count=True, help="Repeat for more detail.")


@click.group()
def cli():
    """Classify DEA units as extreme, non-extreme, weakly efficient or inefficient."""


@cli.command()
@click.argument("file", required=False, type=click.Path(dir_okay=False))
@click.option("--example", type=click.Choice(list(EXAMPLES)), help="Use a bundled dataset.")
@click.option("--format", "fmt", type=click.Choice(REPORT_FORMATS), default="markdown")
@click.option("--method", type=click.Choice(METHODS), default="unified")
@click.option("--orientation", type=click.Choice(ORIENTATIONS), default="all")
@click.option("--tol", type=float, help="Solver feasibility tolerance (overrides DEA_TOL).")
@click.option("--pos-tol", type=float, help="Strict-positivity threshold.")
@click.option("--workers", type=click.IntRange(min=1), help="Thread pool size for unit solves.")
@verbose_option
def classify(file, example, fmt, method, orientation, tol, pos_tol, workers, verbose):
    """Classify every unit of FILE (CSV with header dmu,x1..xm,y1..ys)."""
    _setup_logging(verbose)
    try:
        tolerances = ToleranceConfig.from_env().with_overrides(feas_tol=tol, pos_tol=pos_tol)
        cfg = CliConfig(file, example, fmt, method, orientation, tolerances, workers)
        code = run_classify(cfg)
    except (ValueError, RuntimeError, OSError) as exc:
        _fail(exc)
    sys.exit(code)


@cli.command()
@click.option("--seed", type=int, default=BenchConfig.seed, show_default=True)
@click.option("--instances", type=click.IntRange(min=1), default=BenchConfig.instances)
@click.option("--n", "n_range", default="10", show_default=True, help="Units, e.g. 10 or 2-10.")
@click.option("--m", "m_range", default="2", show_default=True, help="Inputs.")
@click.option("--s", "s_range", default="2", show_default=True, help="Outputs.")
@click.option("--zeros", type=click.FloatRange(0, 1), default=0.2, show_default=True)
@click.option("--shift", type=float, default=0.0, show_default=True, help="Negative shift.")
@click.option("--format", "fmt", type=click.Choice(["markdown", "json"]), default="markdown")
@click.option("--tol", type=float, help="Solver feasibility tolerance (overrides DEA_TOL).")
@verbose_option
def bench(seed, instances, n_range, m_range, s_range, zeros, shift, fmt, tol, verbose):
    """Compare LP solves, wall time and labels of the unified and RDSE routes."""
    _setup_logging(verbose)
    try:
        cfg = BenchConfig(
            seed=seed,
            instances=instances,
            n=parse_range(n_range),
            m=parse_range(m_range),
            s=parse_range(s_range),
            zero_density=zeros,
            negative_shift=shift,
            tolerances=ToleranceConfig.from_env().with_overrides(feas_tol=tol),
        )
        stats = run_bench(cfg)
    except (ValueError, RuntimeError) as exc:
        _fail(exc)
    click.echo(render_bench(stats, fmt), nl=False)
    sys.exit(EXIT_OK if stats.passed else EXIT_DISAGREE)


@cli.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--n", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--m", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--s", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--zeros", type=click.FloatRange(0, 1), default=0.0, show_default=True)
@click.option("--shift", type=float, default=0.0, show_default=True, help="Negative shift.")
@click.option("--output", type=click.Path(dir_okay=False), help="Write here instead of stdout.")
def gen(seed, n, m, s, zeros, shift, output):
    """Generate a random dataset as CSV."""
    ds = random_dataset(seed, n, m, s, zeros, shift)
    if output:
        write_csv(ds, output)
    else:
        click.echo(write_csv(ds), nl=False)


def main():
    cli()


if __name__ == "__main__":
    main()
