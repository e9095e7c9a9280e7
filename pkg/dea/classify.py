"""Classification routes: unified single-stage, three-pass RDSE, and their cross-check."""

__all__ = [
    "OrientedClass",
    "ParetoClass",
    "FarrellClass",
    "FullClassification",
    "LpSolveCounts",
    "UnitAgreement",
    "CrossValidationReport",
    "classify_unified",
    "classify_all_unified",
    "classify_rdse_farrell",
    "classify_rdse_pareto",
    "classify_all_rdse_pareto",
    "classify_pareto_translated",
    "classify_three_pass",
    "reconstruct_dominator",
    "lift_dominating_point",
    "verify_membership",
    "membership_sets",
    "expected_three_pass_counts",
    "cross_validate",
]

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from dea.models import (
    Orientation,
    RdseResult,
    UnifiedOutcome,
    complete_rdse,
    solve_rdse,
    solve_unified,
)
from lp_tools.problem import LpProblem, LpRow, PivotRule, Relation, Sense
from lp_tools.simplex import solve
from util.core import Dataset, IOPoint, ToleranceConfig, n_plus, positive_shift
from util.errors import DimensionError, PreconditionError

logger = logging.getLogger(__name__)


class OrientedClass(str, Enum):
    E = "E"
    EPRIME = "E'"
    WE = "WE"
    NW = "NW"
    NN = "NN"
    NOT_APPLICABLE = "n/a"


class ParetoClass(str, Enum):
    E = "E"
    EPRIME = "E'"
    WEP = "WEP"
    NEP = "NEP"


class FarrellClass(str, Enum):
    E = "E"
    EPRIME = "E'"
    WE = "WE"
    NE = "NE"


_STRONG = {"E", "E'"}


@dataclass(frozen=True)
class FullClassification:
    index: int
    name: str
    pareto: ParetoClass
    input: OrientedClass
    output: OrientedClass
    evidence: UnifiedOutcome | None = field(default=None, compare=False, repr=False)

    @property
    def strongly_efficient(self) -> bool:
        return self.pareto.value in _STRONG


@dataclass(frozen=True)
class LpSolveCounts:
    """Stage-level LP solves: score stages and slack stages."""

    stage_one: int = 0
    stage_two: int = 0

    @property
    def total(self) -> int:
        return self.stage_one + self.stage_two

    def __add__(self, other: "LpSolveCounts") -> "LpSolveCounts":
        return LpSolveCounts(self.stage_one + other.stage_one, self.stage_two + other.stage_two)


@dataclass(frozen=True)
class UnitAgreement:
    """Labels one unit received from each route, keyed by classification kind."""

    name: str
    labels: dict[str, tuple[str, ...]]

    @property
    def agrees(self) -> bool:
        return all(len(set(values)) == 1 for values in self.labels.values())


@dataclass(frozen=True)
class CrossValidationReport:
    routes: tuple[str, ...]
    units: tuple[UnitAgreement, ...]
    lp_solves: dict[str, LpSolveCounts]
    classifications: tuple[FullClassification, ...] = field(default=(), repr=False)

    @property
    def n_agree(self) -> int:
        return sum(unit.agrees for unit in self.units)

    @property
    def passed(self) -> bool:
        return self.n_agree == len(self.units)

    @property
    def mismatches(self) -> list[UnitAgreement]:
        return [unit for unit in self.units if not unit.agrees]


def _oriented(side_inefficient: bool, pareto: ParetoClass) -> OrientedClass:
    if not side_inefficient:
        return OrientedClass.WE
    return OrientedClass.NN if pareto is ParetoClass.NEP else OrientedClass.NW


def classify_unified(
    ds: Dataset,
    o: int,
    config: ToleranceConfig | None = None,
    rule: PivotRule | str | None = None,
) -> FullClassification:
    """
    Classify unit o from one solve of the unified dominance program.

    With indicator sums (a, b): infeasible is E, a + b = 0 is E', a + b = m + s is NEP and
    anything else WEP. On nonnegative data the unit is input inefficient iff every positive
    input carries an indicator of 1 (for inputs this is a = n+(x_o), since zero inputs are
    locked at 0), and output inefficient iff every positive output does. A zero output may
    carry an indicator too, so b = n+(y_o) alone would misread it.
    """
    config = config or ToleranceConfig()
    outcome = solve_unified(ds, o, config, rule)
    oriented = ds.nonnegative
    name = ds.names[o]

    if not outcome.feasible:
        label = OrientedClass.E if oriented else OrientedClass.NOT_APPLICABLE
        return FullClassification(o, name, ParetoClass.E, label, label, outcome)

    a, b = outcome.sum_t_minus, outcome.sum_t_plus
    if a + b == 0:
        label = OrientedClass.EPRIME if oriented else OrientedClass.NOT_APPLICABLE
        return FullClassification(o, name, ParetoClass.EPRIME, label, label, outcome)

    pareto = ParetoClass.NEP if a + b == ds.m + ds.s else ParetoClass.WEP
    if not oriented:
        na = OrientedClass.NOT_APPLICABLE
        return FullClassification(o, name, pareto, na, na, outcome)
    x_o, y_o = ds.point(o)
    return FullClassification(
        o,
        name,
        pareto,
        _oriented(_covers_support(outcome.t_minus_binary, x_o, config), pareto),
        _oriented(_covers_support(outcome.t_plus_binary, y_o, config), pareto),
        outcome,
    )


def _covers_support(indicators: np.ndarray, v: np.ndarray, config: ToleranceConfig) -> bool:
    positive = v > config.pos_tol
    return int(indicators[positive].sum()) == n_plus(v, config.pos_tol)


def classify_all_unified(
    ds: Dataset,
    config: ToleranceConfig | None = None,
    rule: PivotRule | str | None = None,
    workers: int | None = None,
) -> list[FullClassification]:
    """One unified solve per unit, results in unit order. workers > 1 uses a thread pool."""
    config = config or ToleranceConfig()
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda o: classify_unified(ds, o, config, rule), range(ds.n)))
    else:
        results = [classify_unified(ds, o, config, rule) for o in range(ds.n)]
    logger.info("Classified %d units with %d unified solves", ds.n, ds.n)
    return results


def _require_nonnegative(ds: Dataset, what: str):
    if not ds.nonnegative:
        raise PreconditionError(f"{what} needs nonnegative data.")


def _farrell_direction(ds: Dataset, o: int, orientation: Orientation):
    x_o, y_o = ds.point(o)
    if Orientation(orientation) is Orientation.INPUT:
        return x_o, np.zeros(ds.s)
    return np.zeros(ds.m), y_o


def _zero_slacks(result: RdseResult, ds: Dataset, config: ToleranceConfig) -> bool:
    return result.slack_sum <= (ds.m + ds.s) * config.feas_tol


def _farrell_label(result: RdseResult, ds: Dataset, config: ToleranceConfig) -> FarrellClass:
    if not result.solved or result.beta > 0:
        return FarrellClass.E
    if result.beta < 0:
        return FarrellClass.NE
    if _zero_slacks(result, ds, config):
        return FarrellClass.EPRIME
    # with a zero radial vector any dominating point improves every positive component
    return FarrellClass.NE if result.degenerate else FarrellClass.WE


def _pareto_label(result: RdseResult, ds: Dataset, config: ToleranceConfig) -> ParetoClass:
    if not result.solved or result.beta > 0:
        return ParetoClass.E
    if result.beta < 0:
        return ParetoClass.NEP
    return ParetoClass.EPRIME if _zero_slacks(result, ds, config) else ParetoClass.WEP


def _needs_slacks(result: RdseResult) -> bool:
    return result.solved and result.beta == 0


def _two_stage(ds: Dataset, o: int, g_minus, g_plus, config: ToleranceConfig) -> RdseResult:
    result = solve_rdse(ds, o, g_minus, g_plus, config, slack_stage=False)
    if _needs_slacks(result):
        result = complete_rdse(result, ds, o, config)
    return result


def classify_rdse_farrell(
    ds: Dataset,
    o: int,
    orientation: Orientation | str = Orientation.INPUT,
    config: ToleranceConfig | None = None,
) -> FarrellClass:
    """
    Farrell label of unit o from the RDSE model with g = (x_o, 0) for the input
    orientation or g = (0, y_o) for the output orientation.

    E if beta* > 0 or infeasible, E' if beta* = 0 with zero slacks, WE if beta* = 0 with
    some slack, NE if beta* < 0.
    """
    config = config or ToleranceConfig()
    _require_nonnegative(ds, "Farrell classification")
    g_minus, g_plus = _farrell_direction(ds, o, orientation)
    return _farrell_label(_two_stage(ds, o, g_minus, g_plus, config), ds, config)


def classify_rdse_pareto(
    ds: Dataset, o: int, config: ToleranceConfig | None = None
) -> ParetoClass:
    """Pareto label of unit o from the RDSE model with the unit direction g = (1_m, -1_s)."""
    config = config or ToleranceConfig()
    return _pareto_label(_two_stage(ds, o, np.ones(ds.m), np.ones(ds.s), config), ds, config)


def _pareto_routes(ds: Dataset, config: ToleranceConfig, translate: bool):
    """Pareto labels and solve counts for the unit direction or the translated proportional one."""
    if translate:
        input_shift, output_shift = positive_shift(ds)
        work = ds.translated(input_shift, output_shift)
        logger.debug("Translated data by %s (inputs) and %s (outputs)", input_shift, output_shift)
    else:
        work = ds
    labels, counts = [], LpSolveCounts()
    for o in range(ds.n):
        if translate:
            g_minus, g_plus = work.point(o)
        else:
            g_minus, g_plus = np.ones(ds.m), np.ones(ds.s)
        result = _two_stage(work, o, g_minus, g_plus, config)
        counts += LpSolveCounts(1, result.stages - 1 if result.solved else 0)
        labels.append(_pareto_label(result, work, config))
    return labels, counts


def classify_all_rdse_pareto(
    ds: Dataset, config: ToleranceConfig | None = None
) -> tuple[list[ParetoClass], LpSolveCounts]:
    """Pareto labels of every unit with the direction g = (1_m, -1_s), and the solves spent."""
    return _pareto_routes(ds, config or ToleranceConfig(), translate=False)


def classify_pareto_translated(
    ds: Dataset, config: ToleranceConfig | None = None
) -> list[ParetoClass]:
    """
    Pareto labels after shifting every row to values >= 1, using the proportional direction
    g = (x_o, y_o) of the shifted unit.
    """
    return _pareto_routes(ds, config or ToleranceConfig(), translate=True)[0]


def classify_three_pass(
    ds: Dataset, config: ToleranceConfig | None = None
) -> tuple[list[FullClassification], LpSolveCounts]:
    """
    Classify all units with the three-step RDSE procedure.

    Step 1 runs the input Farrell direction for every unit. Step 2 runs the output
    direction for WE_I and NE_I. Step 3 runs the unit Pareto direction for NE_I and NE_O.
    Slack stages run only where the step-1 score is zero, since E and E' are settled
    there and later steps read the sign of beta* alone.

    Returns:
        tuple: Classifications in unit order, and the stage-level LP solve counts.
    """
    config = config or ToleranceConfig()
    _require_nonnegative(ds, "The three-pass procedure")
    n = ds.n
    stage_one = stage_two = 0

    farrell_input: list[FarrellClass] = []
    for o in range(n):
        g_minus, g_plus = _farrell_direction(ds, o, Orientation.INPUT)
        result = solve_rdse(ds, o, g_minus, g_plus, config, slack_stage=False)
        stage_one += 1
        if _needs_slacks(result):
            result = complete_rdse(result, ds, o, config)
            stage_two += 1
        farrell_input.append(_farrell_label(result, ds, config))

    farrell_output: dict[int, FarrellClass] = {}
    for o in range(n):
        if farrell_input[o] not in (FarrellClass.WE, FarrellClass.NE):
            continue
        g_minus, g_plus = _farrell_direction(ds, o, Orientation.OUTPUT)
        result = solve_rdse(ds, o, g_minus, g_plus, config, slack_stage=False)
        stage_one += 1
        if not result.solved or result.beta > 0:
            logger.warning(
                "Unit %s is not extreme efficient but the output step reads it so", ds.names[o]
            )
            farrell_output[o] = FarrellClass.WE
        elif result.degenerate or result.beta < 0:
            farrell_output[o] = FarrellClass.NE
        else:
            farrell_output[o] = FarrellClass.WE

    pareto: dict[int, ParetoClass] = {}
    for o, label in farrell_output.items():
        if label is FarrellClass.WE and farrell_input[o] is FarrellClass.WE:
            pareto[o] = ParetoClass.WEP
            continue
        result = solve_rdse(ds, o, np.ones(ds.m), np.ones(ds.s), config, slack_stage=False)
        stage_one += 1
        pareto[o] = ParetoClass.NEP if result.solved and result.beta < 0 else ParetoClass.WEP

    results = []
    for o in range(n):
        name = ds.names[o]
        first = farrell_input[o]
        if first in (FarrellClass.E, FarrellClass.EPRIME):
            strong = ParetoClass(first.value)
            oriented = OrientedClass(first.value)
            results.append(FullClassification(o, name, strong, oriented, oriented))
            continue
        p = pareto[o]
        results.append(
            FullClassification(
                o,
                name,
                p,
                _oriented(first is FarrellClass.NE, p),
                _oriented(farrell_output[o] is FarrellClass.NE, p),
            )
        )
    counts = LpSolveCounts(stage_one, stage_two)
    logger.info("Three-pass route: %d score solves, %d slack solves", stage_one, stage_two)
    return results, counts


def reconstruct_dominator(outcome: UnifiedOutcome, ds: Dataset, o: int) -> IOPoint:
    """The point (x_o - t_minus/sigma, y_o + t_plus/sigma) built from a feasible unified optimum."""
    if not outcome.feasible:
        raise PreconditionError("An infeasible outcome has no dominating point.")
    x_o, y_o = ds.point(o)
    sigma = outcome.sigma
    return IOPoint(x_o - outcome.t_minus / sigma, y_o + outcome.t_plus / sigma)


def _as_point(point) -> IOPoint:
    x, y = point
    return IOPoint(
        np.atleast_1d(np.asarray(x, dtype=float)), np.atleast_1d(np.asarray(y, dtype=float))
    )


def lift_dominating_point(
    point,
    mu,
    ds: Dataset,
    o: int,
    config: ToleranceConfig | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Map a point of the dominating set of unit o, with its intensity witness mu over the
    reference set without o, to a solution (delta, t_minus, t_plus) of the unified system.

    The slacks are s_minus = x_o - X_o mu and s_plus = Y_o mu - y_o. Indicators mark the
    positive slacks and delta = sigma * mu with sigma = max(1, 1 / smallest positive slack).
    """
    config = config or ToleranceConfig()
    tol = config.pos_tol
    point = _as_point(point)
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    ref = ds.reduced(o)
    x_o, y_o = ds.point(o)
    if mu.size != ref.size or point.x.size != ds.m or point.y.size != ds.s:
        raise DimensionError("Point or witness does not match the dataset dimensions.")
    if np.any(mu < -tol) or abs(mu.sum() - 1.0) > tol:
        raise PreconditionError("The witness must be a convex weight vector.")
    mu = np.maximum(mu, 0.0)
    in_technology = np.all(ref.X_o @ mu <= point.x + tol) and np.all(ref.Y_o @ mu >= point.y - tol)
    dominates = np.all(point.x <= x_o + tol) and np.all(point.y >= y_o - tol)
    if not (in_technology and dominates):
        raise PreconditionError(f"The point is not a dominating point of unit {ds.names[o]}.")

    s_minus = np.maximum(x_o - ref.X_o @ mu, 0.0)
    s_plus = np.maximum(ref.Y_o @ mu - y_o, 0.0)
    slacks = np.concatenate([s_minus, s_plus])
    positive = slacks[slacks > tol]
    sigma = max(1.0, 1.0 / positive.min()) if positive.size else 1.0
    return sigma * mu, (s_minus > tol).astype(float), (s_plus > tol).astype(float)


def verify_membership(point, ds: Dataset, o: int, config: ToleranceConfig | None = None) -> bool:
    """Whether the point lies in the technology spanned by every unit except o."""
    config = config or ToleranceConfig()
    point = _as_point(point)
    ref = ds.reduced(o)
    k = ref.size
    if k == 0:
        return False
    rows = [LpRow(ref.X_o[i], Relation.LE, point.x[i]) for i in range(ds.m)]
    rows += [LpRow(ref.Y_o[r], Relation.GE, point.y[r]) for r in range(ds.s)]
    rows.append(LpRow(np.ones(k), Relation.EQ, 1.0))
    problem = LpProblem(
        sense=Sense.MINIMIZE,
        c=np.zeros(k),
        rows=tuple(rows),
        lower=np.zeros(k),
        upper=np.full(k, math.inf),
    )
    return solve(problem, config).optimal


_MEMBERSHIP_KEYS = (
    "E",
    "E'",
    "WE_I",
    "NW_I",
    "NN_I",
    "WE_O",
    "NW_O",
    "NN_O",
    "WE_P",
    "NE_P",
    "NE_I",
    "NE_O",
)


def membership_sets(classifications: list[FullClassification]) -> dict[str, list[str]]:
    """Named unit sets of the input, output and Pareto partitions, in unit order."""
    sets = {key: [] for key in _MEMBERSHIP_KEYS}
    for c in classifications:
        if c.pareto is ParetoClass.E:
            sets["E"].append(c.name)
            continue
        if c.pareto is ParetoClass.EPRIME:
            sets["E'"].append(c.name)
            continue
        sets["WE_P" if c.pareto is ParetoClass.WEP else "NE_P"].append(c.name)
        for side, label in (("I", c.input), ("O", c.output)):
            if label is OrientedClass.NOT_APPLICABLE:
                continue
            sets[f"{label.value}_{side}"].append(c.name)
            if label in (OrientedClass.NW, OrientedClass.NN):
                sets[f"NE_{side}"].append(c.name)
    return sets


def expected_three_pass_counts(
    classifications: list[FullClassification], ds: Dataset | None = None
) -> LpSolveCounts:
    """
    Solve counts of the three-pass procedure predicted from memberships:
    n + |WE_I u NE_I| + |NE_I u NE_O| score solves and |E' u WE_I| slack solves.
    """
    sets = membership_sets(classifications)
    we_i, ne_i, ne_o = set(sets["WE_I"]), set(sets["NE_I"]), set(sets["NE_O"])
    stage_one = len(classifications) + len(we_i | ne_i) + len(ne_i | ne_o)
    stage_two = len(set(sets["E'"]) | we_i)
    if ds is not None:
        stage_two += sum(
            1
            for c in classifications
            if c.pareto is not ParetoClass.E
            and c.pareto is not ParetoClass.EPRIME
            and n_plus(ds.point(c.index).x) == 0
        )
    return LpSolveCounts(stage_one, stage_two)


def cross_validate(
    ds: Dataset,
    config: ToleranceConfig | None = None,
    workers: int | None = None,
) -> CrossValidationReport:
    """
    Run the unified route against the RDSE routes and compare labels unit by unit.

    Nonnegative data compares input, output and Pareto labels with the three-pass route.
    Other data compares Pareto labels of the unified route, the unit-direction RDSE route
    and the translated proportional-direction route.
    """
    config = config or ToleranceConfig()
    unified = classify_all_unified(ds, config, workers=workers)
    lp_solves = {"unified": LpSolveCounts(ds.n, 0)}

    if ds.nonnegative:
        three, counts = classify_three_pass(ds, config)
        lp_solves["three_pass"] = counts
        routes = ("unified", "three_pass")
        units = tuple(
            UnitAgreement(
                u.name,
                {
                    "input": (u.input.value, t.input.value),
                    "output": (u.output.value, t.output.value),
                    "pareto": (u.pareto.value, t.pareto.value),
                },
            )
            for u, t in zip(unified, three)
        )
    else:
        direct, direct_counts = _pareto_routes(ds, config, translate=False)
        shifted, shifted_counts = _pareto_routes(ds, config, translate=True)
        lp_solves["rdse_pareto"] = direct_counts
        lp_solves["translated"] = shifted_counts
        routes = ("unified", "rdse_pareto", "translated")
        units = tuple(
            UnitAgreement(u.name, {"pareto": (u.pareto.value, d.value, s.value)})
            for u, d, s in zip(unified, direct, shifted)
        )

    report = CrossValidationReport(routes, units, lp_solves, tuple(unified))
    for unit in report.mismatches:
        logger.warning("Routes disagree on unit %s: %s", unit.name, unit.labels)
    logger.info("Cross-validation: %d/%d units agree", report.n_agree, len(units))
    return report
