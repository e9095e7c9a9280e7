"""Randomized benchmark of the unified route against the RDSE routes."""

__all__ = ["BenchConfig", "BenchStats", "parse_range", "run_bench", "render_bench"]

import json
import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from dea.classify import (
    LpSolveCounts,
    classify_all_rdse_pareto,
    classify_all_unified,
    classify_three_pass,
    expected_three_pass_counts,
)
from util.core import ToleranceConfig
from util.sampling import random_dataset

logger = logging.getLogger(__name__)

SEED = 42

N_INSTANCES = 100


def parse_range(text: str | int) -> tuple[int, int]:
    """Read "10" as (10, 10) and "2-10" as (2, 10)."""
    if isinstance(text, int):
        return text, text
    parts = str(text).strip().split("-")
    try:
        lo, hi = (int(parts[0]), int(parts[-1])) if len(parts) <= 2 else (None, None)
    except ValueError:
        lo = hi = None
    if lo is None or lo < 1 or hi < lo:
        raise ValueError(f"Expected a size like '10' or '2-10', got '{text}'.")
    return lo, hi


@dataclass(frozen=True)
class BenchConfig:
    seed: int = SEED
    instances: int = N_INSTANCES
    n: tuple[int, int] = (10, 10)
    m: tuple[int, int] = (2, 2)
    s: tuple[int, int] = (2, 2)
    zero_density: float = 0.2
    negative_shift: float = 0.0
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)

    def __post_init__(self):
        if self.instances < 1:
            raise ValueError("instances must be >= 1.")
        if not (0.0 <= self.zero_density <= 1.0):
            raise ValueError("zero_density must be in [0,1].")


@dataclass(frozen=True)
class BenchStats:
    instances: int
    units: int
    unified_solves_mean: float
    rdse_stage_one_mean: float
    rdse_stage_two_mean: float
    unified_seconds: float
    rdse_seconds: float
    agreement_rate: float
    formula_matches: int
    negative_instances: int

    @property
    def passed(self) -> bool:
        return self.agreement_rate == 1.0


def _size(rng: np.random.Generator, bounds: tuple[int, int]) -> int:
    lo, hi = bounds
    return int(rng.integers(lo, hi + 1))


def run_bench(config: BenchConfig) -> BenchStats:
    """
    Generate `config.instances` datasets and classify each with both routes.

    Nonnegative instances use the three-pass procedure; mixed-sign instances compare
    Pareto labels with the unit-direction RDSE route. An instance agrees when every unit
    gets identical labels from both routes.
    """
    rng = np.random.default_rng(config.seed)
    tol = config.tolerances
    unified_total = units = agreed = formula_matches = negative = 0
    rdse_counts = LpSolveCounts()
    unified_seconds = rdse_seconds = 0.0

    for k in range(config.instances):
        ds = random_dataset(
            rng,
            _size(rng, config.n),
            _size(rng, config.m),
            _size(rng, config.s),
            config.zero_density,
            config.negative_shift,
        )
        units += ds.n

        start = time.perf_counter()
        unified = classify_all_unified(ds, tol)
        unified_seconds += time.perf_counter() - start
        unified_total += ds.n

        start = time.perf_counter()
        if ds.nonnegative:
            other, counts = classify_three_pass(ds, tol)
            rdse_seconds += time.perf_counter() - start
            same = other == unified
            formula_matches += counts == expected_three_pass_counts(other, ds)
        else:
            labels, counts = classify_all_rdse_pareto(ds, tol)
            rdse_seconds += time.perf_counter() - start
            same = labels == [c.pareto for c in unified]
            negative += 1
        rdse_counts += counts
        agreed += same
        if not same:
            logger.warning("Instance %d: routes disagree", k)
        if (k + 1) % max(1, config.instances // 10) == 0:
            logger.info("Benchmark progress: %d/%d instances", k + 1, config.instances)

    count = config.instances
    return BenchStats(
        instances=count,
        units=units,
        unified_solves_mean=unified_total / count,
        rdse_stage_one_mean=rdse_counts.stage_one / count,
        rdse_stage_two_mean=rdse_counts.stage_two / count,
        unified_seconds=unified_seconds,
        rdse_seconds=rdse_seconds,
        agreement_rate=agreed / count,
        formula_matches=formula_matches,
        negative_instances=negative,
    )


def render_bench(stats: BenchStats, fmt: str = "markdown") -> str:
    if fmt == "json":
        return json.dumps({**asdict(stats), "passed": stats.passed}, indent=2) + "\n"
    if fmt != "markdown":
        raise ValueError(f"Unknown format '{fmt}'. Choose from markdown, json.")
    lines = [
        "| route | mean LP solves | wall time (s) |",
        "|---|---|---|",
        f"| unified | {stats.unified_solves_mean:.2f} | {stats.unified_seconds:.3f} |",
        f"| rdse | {stats.rdse_stage_one_mean + stats.rdse_stage_two_mean:.2f} "
        f"({stats.rdse_stage_one_mean:.2f} + {stats.rdse_stage_two_mean:.2f}) "
        f"| {stats.rdse_seconds:.3f} |",
        "",
        f"Instances: {stats.instances} ({stats.units} units, "
        f"{stats.negative_instances} with negative data)",
        f"Agreement: {stats.agreement_rate:.1%}",
        f"Solve-count formula matched: {stats.formula_matches}/"
        f"{stats.instances - stats.negative_instances}",
    ]
    return "\n".join(lines) + "\n"


def main():
    stats = run_bench(BenchConfig())
    print(render_bench(stats), end="")


if __name__ == "__main__":
    main()
