"""Two-phase primal simplex for linear programs with individually bounded variables."""

__all__ = ["solve", "solve_with_pivot_rule"]

import logging
import math

import numpy as np

from lp_tools.problem import LpOutcome, LpProblem, PivotRule, Relation, Sense, Verdict
from util.constants import DEGENERATE_SWITCH_FACTOR
from util.core import ToleranceConfig
from util.errors import ModelError, SolverStallError

logger = logging.getLogger(__name__)

_PIVOT_TOL = 1e-10
_DRIVE_OUT_TOL = 1e-7
_ZERO_TOL = 1e-13


class _BoundedTableau:
    """
    Dense tableau T = B^-1 [A | D] where D holds one artificial column per row.

    Every nonbasic variable sits at one of its finite bounds, or at 0 when it is free,
    so a single direction (+1 or -1) describes each candidate move.
    """

    def __init__(
        self,
        A: np.ndarray,
        b: np.ndarray,
        lower: np.ndarray,
        upper: np.ndarray,
        config: ToleranceConfig,
        rule: PivotRule,
    ):
        m, n = A.shape
        self.m, self.n = m, n
        self.config = config
        self.rule = rule
        self.degenerate_pivots = 0
        self.degenerate_limit = DEGENERATE_SWITCH_FACTOR * (m + n)
        self.iterations = 0

        x = np.where(np.isfinite(lower), lower, np.where(np.isfinite(upper), upper, 0.0))
        residual = b - A @ x
        self.signs = np.where(residual >= 0, 1.0, -1.0)
        self.A = np.hstack([A, np.diag(self.signs)])
        self.b = b
        self.T = self.A * self.signs[:, None]
        self.x = np.concatenate([x, np.abs(residual)])
        self.lower = np.concatenate([lower, np.zeros(m)])
        self.upper = np.concatenate([upper, np.full(m, np.inf)])
        self.basis = np.arange(n, n + m)
        self.is_basic = np.zeros(n + m, dtype=bool)
        self.is_basic[self.basis] = True
        self.enterable = np.ones(n + m, dtype=bool)

    def run(self, cost: np.ndarray) -> bool:
        """Pivot to optimality for `cost` (minimized). Returns False on an unbounded ray."""
        tol = self.config.feas_tol
        while True:
            d = cost - cost[self.basis] @ self.T
            open_ = self.enterable & ~self.is_basic
            inc = open_ & (d < -tol) & (self.upper - self.x > tol)
            dec = open_ & (d > tol) & (self.x - self.lower > tol)
            candidates = np.flatnonzero(inc | dec)
            if candidates.size == 0:
                return True
            if self.iterations >= self.config.max_iterations:
                raise SolverStallError(
                    f"Simplex exceeded {self.config.max_iterations} iterations "
                    f"({self.m} rows, {self.n} columns)."
                )
            self.iterations += 1
            if self.rule is PivotRule.BLAND:
                j = int(candidates[0])
            else:
                j = int(candidates[np.argmax(np.abs(d[candidates]))])
            if not self._step(j, 1.0 if inc[j] else -1.0):
                return False

    def _step(self, j: int, direction: float) -> bool:
        col = direction * self.T[:, j]
        basis = self.basis
        xb = self.x[basis]
        ratios = np.full(self.m, np.inf)
        # basic variables move by -theta * col when the entering one moves by theta
        down = col > _PIVOT_TOL
        up = col < -_PIVOT_TOL
        ratios[down] = (xb[down] - self.lower[basis][down]) / col[down]
        ratios[up] = (self.upper[basis][up] - xb[up]) / -col[up]
        ratios = np.maximum(ratios, 0.0)
        best = float(ratios.min()) if self.m else math.inf
        flip = self.upper[j] - self.lower[j]

        if not math.isfinite(flip) and not math.isfinite(best):
            return False

        if flip <= best:
            self.x[basis] -= flip * col
            self.x[j] = self.upper[j] if direction > 0 else self.lower[j]
            self._track_degeneracy(flip)
            return True

        ties = np.flatnonzero(ratios <= best + _PIVOT_TOL)
        if self.rule is PivotRule.BLAND:
            r = int(ties[np.argmin(basis[ties])])
        else:
            r = int(ties[np.argmax(np.abs(col[ties]))])
        theta = ratios[r]
        leaving = basis[r]
        self.x[basis] -= theta * col
        self.x[j] += direction * theta
        self.x[leaving] = self.lower[leaving] if col[r] > 0 else self.upper[leaving]
        self._pivot(r, j)
        self._track_degeneracy(theta)
        return True

    def _pivot(self, r: int, j: int):
        T = self.T
        pivot_row = T[r] / T[r, j]
        factors = T[:, j].copy()
        factors[r] = 0.0
        T -= np.outer(factors, pivot_row)
        T[r] = pivot_row
        T[:, j] = 0.0
        T[r, j] = 1.0
        T[np.abs(T) < _ZERO_TOL] = 0.0
        self.is_basic[self.basis[r]] = False
        self.basis[r] = j
        self.is_basic[j] = True

    def _track_degeneracy(self, theta: float):
        if theta > self.config.feas_tol:
            return
        self.degenerate_pivots += 1
        if self.rule is PivotRule.DANTZIG and self.degenerate_pivots > self.degenerate_limit:
            logger.debug(
                "Switching to Bland's rule after %d degenerate pivots", self.degenerate_pivots
            )
            self.rule = PivotRule.BLAND

    def refresh(self):
        """Recompute basic values from the nonbasic ones to shed accumulated drift."""
        if self.m == 0:
            return
        nonbasic = ~self.is_basic
        rhs = self.b - self.A[:, nonbasic] @ self.x[nonbasic]
        B_inv = self.T[:, self.n :] * self.signs[None, :]
        self.x[self.basis] = B_inv @ rhs

    def drive_out_artificials(self):
        """Replace zero-valued basic artificials where possible and pin the rest at zero."""
        n = self.n
        for r in range(self.m):
            artificial = self.basis[r]
            if artificial < n:
                continue
            row = self.T[r, :n].copy()
            row[self.is_basic[:n]] = 0.0
            j = int(np.argmax(np.abs(row))) if n else 0
            if n and abs(row[j]) > _DRIVE_OUT_TOL:
                self._pivot(r, j)
                self.x[artificial] = 0.0
            else:
                logger.debug("Row %d is redundant; its artificial stays basic at zero", r)
        self.upper[n:] = 0.0
        self.x[n:] = 0.0
        self.enterable[n:] = False
        self.refresh()


def _empty_row_holds(relation: Relation, rhs: float, tol: float) -> bool:
    if relation is Relation.LE:
        return 0.0 <= rhs + tol
    if relation is Relation.GE:
        return 0.0 >= rhs - tol
    return abs(rhs) <= tol


def _standard_form(problem: LpProblem, tol: float):
    """
    Rewrite rows as equalities with bounded slack columns, minimizing.
    Empty rows are dropped; returns None if one of them cannot hold.
    """
    n = problem.n_variables
    kept = []
    for row in problem.rows:
        if np.any(row.coefficients != 0):
            kept.append(row)
        elif not _empty_row_holds(row.relation, row.rhs, tol):
            return None

    k = sum(1 for row in kept if row.relation is not Relation.EQ)
    A = np.zeros((len(kept), n + k))
    b = np.zeros(len(kept))
    slack = n
    for i, row in enumerate(kept):
        A[i, :n] = row.coefficients
        b[i] = row.rhs
        if row.relation is Relation.LE:
            A[i, slack] = 1.0
            slack += 1
        elif row.relation is Relation.GE:
            A[i, slack] = -1.0
            slack += 1

    sign = -1.0 if problem.sense is Sense.MAXIMIZE else 1.0
    cost = np.concatenate([sign * problem.c, np.zeros(k)])
    lower = np.concatenate([problem.lower, np.zeros(k)])
    upper = np.concatenate([problem.upper, np.full(k, np.inf)])
    return A, b, cost, lower, upper


def solve_with_pivot_rule(
    problem: LpProblem,
    config: ToleranceConfig | None = None,
    rule: PivotRule | str = PivotRule.DANTZIG,
) -> LpOutcome:
    """
    Solve `problem` with the two-phase bounded-variable simplex.

    Parameters:
        problem (LpProblem): The program to solve.
        config (ToleranceConfig): Tolerances and iteration cap.
        rule (PivotRule): Entering-variable strategy. Dantzig pricing still falls back to
            Bland's rule once degenerate pivots pile up.

    Returns:
        LpOutcome: Infeasible, Unbounded, or Optimal with the optimal point.
    """
    config = config or ToleranceConfig()
    rule = PivotRule(rule)
    form = _standard_form(problem, config.feas_tol)
    if form is None:
        logger.debug("Empty row cannot hold; infeasible without pivoting")
        return LpOutcome(Verdict.INFEASIBLE, phase_one_objective=math.inf)

    A, b, cost, lower, upper = form
    m, n = A.shape
    tableau = _BoundedTableau(A, b, lower, upper, config, rule)

    if not tableau.run(np.concatenate([np.zeros(n), np.ones(m)])):
        raise ModelError("Phase one reported an unbounded ray.")
    tableau.refresh()
    infeasibility = float(tableau.x[n:].sum())
    scale = 1.0 + (float(np.abs(b).max()) if m else 0.0)
    logger.debug(
        "Phase one finished: infeasibility %.3e after %d pivots",
        infeasibility,
        tableau.iterations,
    )
    if infeasibility > config.feas_tol * scale:
        return LpOutcome(
            Verdict.INFEASIBLE,
            iterations=tableau.iterations,
            phase_one_objective=infeasibility,
        )

    tableau.drive_out_artificials()
    if not tableau.run(np.concatenate([cost, np.zeros(m)])):
        return LpOutcome(
            Verdict.UNBOUNDED,
            iterations=tableau.iterations,
            phase_one_objective=infeasibility,
        )
    tableau.refresh()

    x_star = tableau.x[: problem.n_variables].copy()
    violation = float(problem.residuals(x_star).max()) if problem.n_rows else 0.0
    if violation > config.feas_tol * scale:
        logger.warning("Optimal point violates a row by %.3e", violation)
    return LpOutcome(
        Verdict.OPTIMAL,
        x_star=x_star,
        objective=float(problem.c @ x_star),
        iterations=tableau.iterations,
        phase_one_objective=infeasibility,
    )


def solve(problem: LpProblem, config: ToleranceConfig | None = None) -> LpOutcome:
    return solve_with_pivot_rule(problem, config, PivotRule.DANTZIG)
