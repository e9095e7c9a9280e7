"""Builders and two-stage drivers for the BCC, RDSE and unified dominance programs."""

__all__ = [
    "Orientation",
    "RdseVerdict",
    "UnifiedVerdict",
    "BccResult",
    "RdseResult",
    "UnifiedOutcome",
    "solve_bcc_input",
    "solve_bcc_output",
    "solve_rdse",
    "complete_rdse",
    "build_unified",
    "solve_unified",
]

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from lp_tools.problem import LpProblem, LpRow, PivotRule, Relation, Sense, Verdict
from lp_tools.simplex import solve_with_pivot_rule
from util.core import Dataset, ToleranceConfig, n_plus
from util.errors import ModelError, PreconditionError

logger = logging.getLogger(__name__)


class Orientation(str, Enum):
    INPUT = "input"
    OUTPUT = "output"


class RdseVerdict(str, Enum):
    INFEASIBLE = "infeasible"
    SOLVED = "solved"


class UnifiedVerdict(str, Enum):
    INFEASIBLE = "infeasible"
    FEASIBLE = "feasible"


@dataclass(frozen=True, eq=False)
class BccResult:
    orientation: Orientation
    theta_or_phi: float
    lmbda: np.ndarray
    s_minus: np.ndarray
    s_plus: np.ndarray


@dataclass(frozen=True, eq=False)
class RdseResult:
    """
    Radial directional super-efficiency result. mu is indexed over the reduced reference
    set (unit o removed). stages counts the LPs solved: 1 (score only) or 2 (with slacks).
    """

    verdict: RdseVerdict
    g_minus: np.ndarray
    g_plus: np.ndarray
    beta: float | None = None
    mu: np.ndarray | None = None
    s_minus: np.ndarray | None = None
    s_plus: np.ndarray | None = None
    stages: int = 1

    @property
    def solved(self) -> bool:
        return self.verdict is RdseVerdict.SOLVED

    @property
    def degenerate(self) -> bool:
        """The direction is zero, so beta is pinned at 0."""
        return not (np.any(self.g_minus > 0) or np.any(self.g_plus > 0))

    @property
    def slack_sum(self) -> float:
        return float(self.s_minus.sum() + self.s_plus.sum())


@dataclass(frozen=True, eq=False)
class UnifiedOutcome:
    """
    Optimum of the unified dominance program for one unit.

    t_minus / t_plus hold the raw optimal indicator values; the rounded indicators and
    their sums are derived with the binary threshold.
    """

    verdict: UnifiedVerdict
    m: int
    s: int
    delta: np.ndarray | None = None
    t_minus: np.ndarray | None = None
    t_plus: np.ndarray | None = None
    binary_threshold: float = 0.5
    iterations: int = 0

    @property
    def feasible(self) -> bool:
        return self.verdict is UnifiedVerdict.FEASIBLE

    @property
    def sigma(self) -> float | None:
        return float(self.delta.sum()) if self.feasible else None

    @property
    def t_minus_binary(self) -> np.ndarray | None:
        return (self.t_minus > self.binary_threshold).astype(int) if self.feasible else None

    @property
    def t_plus_binary(self) -> np.ndarray | None:
        return (self.t_plus > self.binary_threshold).astype(int) if self.feasible else None

    @property
    def sum_t_minus(self) -> int | None:
        return int(self.t_minus_binary.sum()) if self.feasible else None

    @property
    def sum_t_plus(self) -> int | None:
        return int(self.t_plus_binary.sum()) if self.feasible else None

    @property
    def total(self) -> int | None:
        return self.sum_t_minus + self.sum_t_plus if self.feasible else None


def _check_unit(ds: Dataset, o: int):
    if not (0 <= o < ds.n):
        raise IndexError(f"Unit index {o} out of range for n={ds.n}.")


def _solve(problem: LpProblem, config: ToleranceConfig, rule: PivotRule | str | None):
    return solve_with_pivot_rule(problem, config, rule or PivotRule.DANTZIG)


def _bcc_stage_one(ds: Dataset, o: int, orientation: Orientation) -> LpProblem:
    """
    Radial stage over the full reference set. Variables: (score, lambda_1..lambda_n).
    Input:  min theta  s.t.  X lambda - theta x_o <= 0,  Y lambda >= y_o,  1'lambda = 1.
    Output: max phi    s.t.  X lambda <= x_o,  Y lambda - phi y_o >= 0,  1'lambda = 1.
    """
    n, m, s = ds.n, ds.m, ds.s
    x_o, y_o = ds.point(o)
    rows = []
    if orientation is Orientation.INPUT:
        for i in range(m):
            rows.append(LpRow(np.concatenate([[-x_o[i]], ds.X[i]]), Relation.LE, 0.0))
        for r in range(s):
            rows.append(LpRow(np.concatenate([[0.0], ds.Y[r]]), Relation.GE, y_o[r]))
        sense = Sense.MINIMIZE
    else:
        for i in range(m):
            rows.append(LpRow(np.concatenate([[0.0], ds.X[i]]), Relation.LE, x_o[i]))
        for r in range(s):
            rows.append(LpRow(np.concatenate([[-y_o[r]], ds.Y[r]]), Relation.GE, 0.0))
        sense = Sense.MAXIMIZE
    rows.append(LpRow(np.concatenate([[0.0], np.ones(n)]), Relation.EQ, 1.0))
    c = np.zeros(n + 1)
    c[0] = 1.0
    return LpProblem(
        sense=sense,
        c=c,
        rows=tuple(rows),
        lower=np.concatenate([[-math.inf], np.zeros(n)]),
        upper=np.full(n + 1, math.inf),
    )


def _bcc_stage_two(ds: Dataset, o: int, orientation: Orientation, score: float) -> LpProblem:
    """Slack stage with the radial score fixed. Variables: (lambda, s_minus, s_plus)."""
    n, m, s = ds.n, ds.m, ds.s
    x_o, y_o = ds.point(o)
    x_target = score * x_o if orientation is Orientation.INPUT else x_o
    y_target = y_o if orientation is Orientation.INPUT else score * y_o
    width = n + m + s
    rows = []
    for i in range(m):
        a = np.zeros(width)
        a[:n] = ds.X[i]
        a[n + i] = 1.0
        rows.append(LpRow(a, Relation.EQ, x_target[i]))
    for r in range(s):
        a = np.zeros(width)
        a[:n] = ds.Y[r]
        a[n + m + r] = -1.0
        rows.append(LpRow(a, Relation.EQ, y_target[r]))
    a = np.zeros(width)
    a[:n] = 1.0
    rows.append(LpRow(a, Relation.EQ, 1.0))
    c = np.concatenate([np.zeros(n), np.ones(m + s)])
    return LpProblem(
        sense=Sense.MAXIMIZE,
        c=c,
        rows=tuple(rows),
        lower=np.zeros(width),
        upper=np.full(width, math.inf),
    )


def _solve_bcc(ds: Dataset, o: int, orientation: Orientation, config: ToleranceConfig):
    _check_unit(ds, o)
    if not ds.nonnegative:
        raise PreconditionError("BCC drivers need nonnegative data.")
    radial = ds.point(o).x if orientation is Orientation.INPUT else ds.point(o).y
    if n_plus(radial, config.pos_tol) == 0:
        raise PreconditionError(
            f"The {orientation.value} vector of unit {ds.names[o]} is zero; "
            "the radial score is not identified."
        )

    stage_one = _solve(_bcc_stage_one(ds, o, orientation), config, None)
    if not stage_one.optimal:
        raise ModelError(f"BCC stage one for unit {ds.names[o]} ended {stage_one.verdict.value}.")
    score = stage_one.objective
    if abs(score - 1.0) <= config.pos_tol:
        score = 1.0

    stage_two = _solve(_bcc_stage_two(ds, o, orientation, score), config, None)
    if not stage_two.optimal:
        raise ModelError(f"BCC stage two for unit {ds.names[o]} ended {stage_two.verdict.value}.")
    n, m = ds.n, ds.m
    values = stage_two.x_star
    return BccResult(
        orientation=orientation,
        theta_or_phi=score,
        lmbda=values[:n],
        s_minus=values[n : n + m],
        s_plus=values[n + m :],
    )


def solve_bcc_input(ds: Dataset, o: int, config: ToleranceConfig | None = None) -> BccResult:
    """
    Two-stage input-oriented BCC: minimize theta ignoring slacks, then fix theta
    and maximize the slack sum.
    """
    return _solve_bcc(ds, o, Orientation.INPUT, config or ToleranceConfig())


def solve_bcc_output(ds: Dataset, o: int, config: ToleranceConfig | None = None) -> BccResult:
    """Two-stage output-oriented BCC: maximize phi, then fix phi and maximize the slack sum."""
    return _solve_bcc(ds, o, Orientation.OUTPUT, config or ToleranceConfig())


def _rdse_problem(
    ds: Dataset,
    o: int,
    g_minus: np.ndarray,
    g_plus: np.ndarray,
    beta_bounds: tuple[float, float],
    slack_stage: bool,
) -> LpProblem:
    """
    Variables (beta, mu_1..mu_{n-1}, s_minus, s_plus) over the reference set without o:

        X_o mu + s_minus - beta g_minus = x_o
        Y_o mu - s_plus + beta g_plus  = y_o
        1'mu = 1
    """
    ref = ds.reduced(o)
    k, m, s = ref.size, ds.m, ds.s
    x_o, y_o = ds.point(o)
    width = 1 + k + m + s
    rows = []
    for i in range(m):
        a = np.zeros(width)
        a[0] = -g_minus[i]
        a[1 : 1 + k] = ref.X_o[i]
        a[1 + k + i] = 1.0
        rows.append(LpRow(a, Relation.EQ, x_o[i]))
    for r in range(s):
        a = np.zeros(width)
        a[0] = g_plus[r]
        a[1 : 1 + k] = ref.Y_o[r]
        a[1 + k + m + r] = -1.0
        rows.append(LpRow(a, Relation.EQ, y_o[r]))
    a = np.zeros(width)
    a[1 : 1 + k] = 1.0
    rows.append(LpRow(a, Relation.EQ, 1.0))

    c = np.zeros(width)
    if slack_stage:
        c[1 + k :] = 1.0
        sense = Sense.MAXIMIZE
    else:
        c[0] = 1.0
        sense = Sense.MINIMIZE
    lower = np.zeros(width)
    upper = np.full(width, math.inf)
    lower[0], upper[0] = beta_bounds
    return LpProblem(sense=sense, c=c, rows=tuple(rows), lower=lower, upper=upper)


def _unpack_rdse(result: RdseResult, values: np.ndarray, ds: Dataset, beta: float, stages: int):
    k, m = ds.n - 1, ds.m
    return replace(
        result,
        verdict=RdseVerdict.SOLVED,
        beta=beta,
        mu=values[1 : 1 + k],
        s_minus=values[1 + k : 1 + k + m],
        s_plus=values[1 + k + m :],
        stages=stages,
    )


def complete_rdse(
    result: RdseResult, ds: Dataset, o: int, config: ToleranceConfig | None = None
) -> RdseResult:
    """Run the slack stage on a score-only result: fix beta* and maximize the slack sum."""
    config = config or ToleranceConfig()
    if not result.solved or result.stages == 2:
        return result
    beta = result.beta
    problem = _rdse_problem(ds, o, result.g_minus, result.g_plus, (beta, beta), slack_stage=True)
    outcome = _solve(problem, config, None)
    if not outcome.optimal:
        raise ModelError(
            f"RDSE slack stage for unit {ds.names[o]} ended {outcome.verdict.value} "
            f"with beta fixed at {beta}."
        )
    return _unpack_rdse(result, outcome.x_star, ds, beta, stages=2)


def solve_rdse(
    ds: Dataset,
    o: int,
    g_minus,
    g_plus,
    config: ToleranceConfig | None = None,
    slack_stage: bool = True,
) -> RdseResult:
    """
    Radial directional super-efficiency score of unit o along g = (g_minus, -g_plus).

    Stage one minimizes beta; stage two (skipped when slack_stage is False or stage one is
    infeasible) fixes beta* and maximizes the slack sum. A zero direction pins beta at 0,
    which turns stage one into a feasibility test. Scores within pos_tol of zero are
    snapped to exactly zero before the slack stage.
    """
    config = config or ToleranceConfig()
    _check_unit(ds, o)
    g_minus = np.broadcast_to(np.asarray(g_minus, dtype=float), (ds.m,)).copy()
    g_plus = np.broadcast_to(np.asarray(g_plus, dtype=float), (ds.s,)).copy()
    if np.any(g_minus < 0) or np.any(g_plus < 0):
        raise ValueError("Direction components g_minus and g_plus must be nonnegative.")
    result = RdseResult(verdict=RdseVerdict.INFEASIBLE, g_minus=g_minus, g_plus=g_plus)
    if ds.n == 1:
        return result

    beta_bounds = (0.0, 0.0) if result.degenerate else (-math.inf, math.inf)
    outcome = _solve(_rdse_problem(ds, o, g_minus, g_plus, beta_bounds, False), config, None)
    if outcome.verdict is Verdict.INFEASIBLE:
        logger.debug("RDSE stage one infeasible for unit %s", ds.names[o])
        return result
    if outcome.verdict is Verdict.UNBOUNDED:
        raise ModelError(f"RDSE stage one unbounded for unit {ds.names[o]}.")

    beta = float(outcome.x_star[0])
    if abs(beta) <= config.pos_tol:
        beta = 0.0
    result = _unpack_rdse(result, outcome.x_star, ds, beta, stages=1)
    if slack_stage:
        result = complete_rdse(result, ds, o, config)
    return result


def build_unified(ds: Dataset, o: int) -> LpProblem:
    """
    The unified dominance program for unit o. Variables (delta_1..delta_{n-1}, t_minus, t_plus):

        max  1't_minus + 1't_plus
        s.t. -X_o delta + (1'delta) x_o >= t_minus
              Y_o delta - (1'delta) y_o >= t_plus
              1'delta >= 1
              delta >= 0,  0 <= t_minus <= 1,  0 <= t_plus <= 1

    With a single unit the delta block is empty and the last row reads 0 >= 1.
    """
    _check_unit(ds, o)
    ref = ds.reduced(o)
    k, m, s = ref.size, ds.m, ds.s
    x_o, y_o = ds.point(o)
    width = k + m + s
    rows = []
    for i in range(m):
        a = np.zeros(width)
        a[:k] = x_o[i] - ref.X_o[i]
        a[k + i] = -1.0
        rows.append(LpRow(a, Relation.GE, 0.0))
    for r in range(s):
        a = np.zeros(width)
        a[:k] = ref.Y_o[r] - y_o[r]
        a[k + m + r] = -1.0
        rows.append(LpRow(a, Relation.GE, 0.0))
    a = np.zeros(width)
    a[:k] = 1.0
    rows.append(LpRow(a, Relation.GE, 1.0))

    c = np.concatenate([np.zeros(k), np.ones(m + s)])
    upper = np.concatenate([np.full(k, math.inf), np.ones(m + s)])
    names = (
        tuple(f"delta[{ds.names[j]}]" for j in ref.index_map)
        + tuple(f"t_minus[{i + 1}]" for i in range(m))
        + tuple(f"t_plus[{r + 1}]" for r in range(s))
    )
    return LpProblem(
        sense=Sense.MAXIMIZE,
        c=c,
        rows=tuple(rows),
        lower=np.zeros(width),
        upper=upper,
        names=names,
    )


def solve_unified(
    ds: Dataset,
    o: int,
    config: ToleranceConfig | None = None,
    rule: PivotRule | str | None = None,
) -> UnifiedOutcome:
    """Solve the unified dominance program for unit o; infeasible means o is extreme efficient."""
    config = config or ToleranceConfig()
    outcome = _solve(build_unified(ds, o), config, rule)
    if outcome.verdict is Verdict.INFEASIBLE:
        return UnifiedOutcome(
            UnifiedVerdict.INFEASIBLE,
            m=ds.m,
            s=ds.s,
            binary_threshold=config.binary_threshold,
            iterations=outcome.iterations,
        )
    if outcome.verdict is Verdict.UNBOUNDED:
        raise ModelError(f"Unified program unbounded for unit {ds.names[o]}.")

    k, m = ds.n - 1, ds.m
    values = outcome.x_star
    result = UnifiedOutcome(
        UnifiedVerdict.FEASIBLE,
        m=ds.m,
        s=ds.s,
        delta=np.maximum(values[:k], 0.0),
        t_minus=np.clip(values[k : k + m], 0.0, 1.0),
        t_plus=np.clip(values[k + m :], 0.0, 1.0),
        binary_threshold=config.binary_threshold,
        iterations=outcome.iterations,
    )
    logger.debug(
        "Unit %s: t_minus=%s t_plus=%s sigma=%.6g",
        ds.names[o],
        result.t_minus_binary,
        result.t_plus_binary,
        result.sigma,
    )
    return result
