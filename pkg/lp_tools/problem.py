"""Linear programs with individually bounded variables, and solver verdicts."""

__all__ = ["Sense", "Relation", "Verdict", "PivotRule", "LpRow", "LpProblem", "LpOutcome"]

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from util.errors import DimensionError


class Sense(str, Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Verdict(str, Enum):
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    OPTIMAL = "optimal"


class PivotRule(str, Enum):
    DANTZIG = "dantzig"
    BLAND = "bland"


@dataclass(frozen=True, eq=False)
class LpRow:
    coefficients: np.ndarray
    relation: Relation
    rhs: float


@dataclass(frozen=True, eq=False)
class LpProblem:
    """
    optimize c @ x  subject to  rows[i].coefficients @ x (<=, =, >=) rows[i].rhs,
                                lower <= x <= upper

    Bounds may be infinite; a variable with (-inf, +inf) bounds is free.
    """

    sense: Sense
    c: np.ndarray
    rows: tuple[LpRow, ...]
    lower: np.ndarray
    upper: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self):
        c = np.array(self.c, dtype=float).reshape(-1)
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        width = c.size
        if lower.size != width or upper.size != width:
            raise DimensionError(
                f"Bounds must match the objective width {width}. "
                f"Got {lower.size} lower and {upper.size} upper bounds."
            )
        if np.any(lower > upper):
            raise ValueError("Every variable needs lower <= upper.")
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)) or np.any(~np.isfinite(c)):
            raise ValueError("Objective and bounds must not contain NaN.")
        rows = []
        for i, row in enumerate(self.rows):
            coefficients = np.array(row.coefficients, dtype=float).reshape(-1)
            if coefficients.size != width:
                raise DimensionError(
                    f"Row {i} has width {coefficients.size}, expected {width}."
                )
            rows.append(LpRow(coefficients, Relation(row.relation), float(row.rhs)))
        object.__setattr__(self, "sense", Sense(self.sense))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "rows", tuple(rows))

    @property
    def n_variables(self) -> int:
        return self.c.size

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @classmethod
    def build(
        cls,
        sense: Sense | str,
        c: Sequence[float],
        rows: Sequence[tuple[Sequence[float], Relation | str, float]],
        bounds: Sequence[tuple[float, float]],
        names: Sequence[str] = (),
    ) -> "LpProblem":
        """Build from (coefficients, relation, rhs) triples and (lo, hi) bound pairs."""
        lower = [-math.inf if lo is None else lo for lo, _ in bounds]
        upper = [math.inf if hi is None else hi for _, hi in bounds]
        return cls(
            sense=Sense(sense),
            c=np.asarray(c, dtype=float),
            rows=tuple(LpRow(np.asarray(a, dtype=float), Relation(r), b) for a, r, b in rows),
            lower=np.asarray(lower, dtype=float),
            upper=np.asarray(upper, dtype=float),
            names=tuple(names),
        )

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Signed violation of every row at x (positive means violated)."""
        out = np.zeros(self.n_rows)
        for i, row in enumerate(self.rows):
            lhs = float(row.coefficients @ x)
            if row.relation is Relation.LE:
                out[i] = lhs - row.rhs
            elif row.relation is Relation.GE:
                out[i] = row.rhs - lhs
            else:
                out[i] = abs(lhs - row.rhs)
        return out


@dataclass(frozen=True, eq=False)
class LpOutcome:
    verdict: Verdict
    x_star: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0
    phase_one_objective: float = 0.0

    @property
    def optimal(self) -> bool:
        return self.verdict is Verdict.OPTIMAL
