import math

import numpy as np
import pytest
from conftest import unit
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from dea.models import build_unified
from lp_tools.problem import LpProblem, PivotRule, Relation, Sense, Verdict
from lp_tools.simplex import solve, solve_with_pivot_rule
from util.core import ToleranceConfig
from util.errors import DimensionError, SolverStallError


def test_forced_zero_box():
    problem = LpProblem.build(
        Sense.MAXIMIZE,
        [1, 1],
        [([1, 0], "<=", 0), ([0, 1], "<=", 0)],
        [(0, 1), (0, 1)],
    )
    outcome = solve(problem)
    assert outcome.verdict is Verdict.OPTIMAL
    assert outcome.objective == pytest.approx(0.0, abs=1e-12)


def test_infeasible():
    problem = LpProblem.build(
        Sense.MINIMIZE, [1], [([1], ">=", 2), ([1], "<=", 1)], [(None, None)]
    )
    outcome = solve(problem)
    assert outcome.verdict is Verdict.INFEASIBLE
    assert outcome.phase_one_objective > 0


def test_unbounded():
    problem = LpProblem.build(Sense.MAXIMIZE, [1, 1], [([1, -1], "<=", 1)], [(0, None), (0, None)])
    assert solve(problem).verdict is Verdict.UNBOUNDED


def test_free_variable_reaches_negative_bound():
    problem = LpProblem.build(Sense.MINIMIZE, [1], [([1], ">=", -3)], [(None, None)])
    outcome = solve(problem)
    assert outcome.optimal
    assert outcome.x_star[0] == pytest.approx(-3.0)


def test_upper_bounds_without_rows():
    problem = LpProblem.build(Sense.MAXIMIZE, [2, 3], [], [(0, 1), (-1, 4)])
    outcome = solve(problem)
    assert outcome.objective == pytest.approx(14.0)
    np.testing.assert_allclose(outcome.x_star, [1, 4])


def test_equality_with_negative_rhs():
    problem = LpProblem.build(
        Sense.MINIMIZE,
        [1, 2],
        [([1, 1], "=", -2), ([1, -1], "<=", 0)],
        [(None, None), (None, None)],
    )
    outcome = solve(problem)
    assert outcome.optimal
    assert outcome.objective == pytest.approx(-3.0)


def test_empty_rows():
    dropped = LpProblem.build(Sense.MAXIMIZE, [1], [([0], "<=", 5)], [(0, 2)])
    assert solve(dropped).objective == pytest.approx(2.0)
    impossible = LpProblem.build(Sense.MAXIMIZE, [1], [([0], ">=", 1)], [(0, 2)])
    outcome = solve(impossible)
    assert outcome.verdict is Verdict.INFEASIBLE
    assert outcome.iterations == 0


def test_degenerate_duplicated_rows_terminate_under_bland():
    rows = [([1, 1, 1], "<=", 1)] * 4 + [([1, -1, 0], "<=", 0)] * 3 + [([0, 1, -1], "=", 0)] * 2
    problem = LpProblem.build(Sense.MAXIMIZE, [1, 1, 1], rows, [(0, None)] * 3)
    for rule in PivotRule:
        outcome = solve_with_pivot_rule(problem, rule=rule)
        assert outcome.optimal
        assert outcome.objective == pytest.approx(1.0)


def test_iteration_cap():
    problem = LpProblem.build(
        Sense.MAXIMIZE,
        [1, 1, 1],
        [([1, 0, 0], ">=", 1), ([0, 1, 0], ">=", 1), ([0, 0, 1], ">=", 1), ([1, 1, 1], "<=", 5)],
        [(0, None)] * 3,
    )
    with pytest.raises(SolverStallError):
        solve(problem, ToleranceConfig(max_iterations=1))


def test_problem_validation():
    with pytest.raises(DimensionError):
        LpProblem.build(Sense.MINIMIZE, [1, 1], [([1], "<=", 1)], [(0, 1), (0, 1)])
    with pytest.raises(DimensionError):
        LpProblem.build(Sense.MINIMIZE, [1, 1], [], [(0, 1)])
    with pytest.raises(ValueError):
        LpProblem.build(Sense.MINIMIZE, [1], [], [(2, 1)])


def test_unified_program_on_example(table1):
    assert solve(build_unified(table1, unit(table1, "A"))).verdict is Verdict.INFEASIBLE
    assert solve(build_unified(table1, unit(table1, "H"))).objective == pytest.approx(3.0)
    for rule in PivotRule:
        outcome = solve_with_pivot_rule(build_unified(table1, unit(table1, "G")), rule=rule)
        assert outcome.objective == pytest.approx(2.0)


@st.composite
def random_lps(draw):
    n_rows = draw(st.integers(1, 4))
    n_vars = draw(st.integers(1, 5))
    ints = st.integers(-5, 5)
    vector = st.lists(ints, min_size=n_vars, max_size=n_vars)
    A = np.array(draw(st.lists(vector, min_size=n_rows, max_size=n_rows)), dtype=float)
    b = np.array(draw(st.lists(st.integers(-6, 6), min_size=n_rows, max_size=n_rows)), float)
    c = np.array(draw(vector), dtype=float)
    relations = draw(st.lists(st.sampled_from(list(Relation)), min_size=n_rows, max_size=n_rows))
    bounds = draw(
        st.lists(
            st.sampled_from([(0, None), (0, 3), (-2, 2), (None, None), (None, 1)]),
            min_size=n_vars,
            max_size=n_vars,
        )
    )
    sense = draw(st.sampled_from(list(Sense)))
    rows = [(A[i], relations[i], b[i]) for i in range(n_rows)]
    return LpProblem.build(sense, c, rows, bounds)


def _highs(problem: LpProblem, objective=None):
    sign = -1.0 if problem.sense is Sense.MAXIMIZE else 1.0
    c = sign * problem.c if objective is None else objective
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for row in problem.rows:
        if row.relation is Relation.LE:
            A_ub.append(row.coefficients)
            b_ub.append(row.rhs)
        elif row.relation is Relation.GE:
            A_ub.append(-row.coefficients)
            b_ub.append(-row.rhs)
        else:
            A_eq.append(row.coefficients)
            b_eq.append(row.rhs)
    bounds = [
        (None if math.isinf(lo) else lo, None if math.isinf(hi) else hi)
        for lo, hi in zip(problem.lower, problem.upper)
    ]
    return linprog(
        c,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=b_ub or None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=b_eq or None,
        bounds=bounds,
        method="highs",
    )


_HIGHS_VERDICT = {0: Verdict.OPTIMAL, 2: Verdict.INFEASIBLE, 3: Verdict.UNBOUNDED}


@settings(max_examples=300, deadline=None)
@given(random_lps())
def test_matches_highs(problem):
    reference = _highs(problem)
    if reference.status not in _HIGHS_VERDICT:
        return
    outcome = solve(problem)
    expected = _HIGHS_VERDICT[reference.status]
    if expected is Verdict.INFEASIBLE and outcome.verdict is Verdict.UNBOUNDED:
        # HiGHS may fold "infeasible or unbounded" into one status
        expected = Verdict.UNBOUNDED
        assert _highs(problem, objective=np.zeros(problem.n_variables)).status == 0
    assert outcome.verdict is expected
    if outcome.optimal:
        sign = -1.0 if problem.sense is Sense.MAXIMIZE else 1.0
        assert outcome.objective == pytest.approx(sign * reference.fun, abs=1e-6)
        assert problem.residuals(outcome.x_star).max(initial=0.0) <= 1e-7
        assert np.all(outcome.x_star >= problem.lower - 1e-9)
        assert np.all(outcome.x_star <= problem.upper + 1e-9)


@settings(max_examples=200, deadline=None)
@given(random_lps())
def test_pivot_rules_agree(problem):
    dantzig = solve_with_pivot_rule(problem, rule=PivotRule.DANTZIG)
    bland = solve_with_pivot_rule(problem, rule="bland")
    assert dantzig.verdict is bland.verdict
    if dantzig.optimal:
        assert dantzig.objective == pytest.approx(bland.objective, abs=1e-7)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(-3, 3), min_size=6, max_size=36))
def test_unit_box_sum_objective_is_bounded(width, coefficients):
    rows = [
        (coefficients[i : i + width], "<=", 1)
        for i in range(0, len(coefficients) - width + 1, width)
    ]
    problem = LpProblem.build(Sense.MAXIMIZE, [1] * width, rows, [(0, 1)] * width)
    outcome = solve(problem)
    if outcome.optimal:
        assert -1e-9 <= outcome.objective <= width + 1e-9
