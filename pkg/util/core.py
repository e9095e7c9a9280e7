"""Core data model and vector relations used by every classification rule."""

__all__ = [
    "Dataset",
    "ReducedDataset",
    "IOPoint",
    "ToleranceConfig",
    "n_plus",
    "gt_plus",
    "weakly_pareto_dominates",
    "strongly_pareto_dominates",
    "fgl_dominates_input",
    "fgl_dominates_output",
    "positive_shift",
]

import os
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from util.constants import (
    BINARY_THRESHOLD,
    FEAS_TOL,
    MAX_ITERATIONS,
    POS_TOL,
    TOL_ENV_VAR,
)
from util.errors import DimensionError, UnsupportedRelationError


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise DimensionError(f"Expected a {ndim}-dimensional array, got shape {arr.shape}.")
    arr.setflags(write=False)
    return arr


class IOPoint(NamedTuple):
    """An input-output combination (x, y)."""

    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances shared by the solver and the classification rules."""

    feas_tol: float = FEAS_TOL
    pos_tol: float = POS_TOL
    binary_threshold: float = BINARY_THRESHOLD
    max_iterations: int = MAX_ITERATIONS

    def __post_init__(self):
        if self.feas_tol <= 0 or self.pos_tol <= 0:
            raise ValueError("Tolerances must be > 0.")
        if not (0 < self.binary_threshold < 1):
            raise ValueError("binary_threshold must be in (0,1).")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1.")

    @classmethod
    def from_env(cls, **overrides) -> "ToleranceConfig":
        """
        Build the default configuration, taking feas_tol from $DEA_TOL when set.
        Explicit keyword overrides win over the environment.
        """
        raw = os.environ.get(TOL_ENV_VAR)
        if raw is not None and "feas_tol" not in overrides:
            try:
                overrides["feas_tol"] = float(raw)
            except ValueError:
                raise ValueError(f"{TOL_ENV_VAR} must be a number, got '{raw}'.") from None
        return cls(**overrides)

    def with_overrides(self, **overrides) -> "ToleranceConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    n observed units, each using m inputs to produce s outputs.

    X is m x n and Y is s x n; column j holds the input and output vectors of unit j.
    """

    X: np.ndarray
    Y: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        X = _frozen(self.X, 2)
        Y = _frozen(self.Y, 2)
        if X.shape[1] != Y.shape[1]:
            raise DimensionError(
                f"X and Y must have the same number of columns. Got {X.shape[1]} and {Y.shape[1]}."
            )
        m, n = X.shape
        if m < 1 or Y.shape[0] < 1 or n < 1:
            raise DimensionError(f"Need m, s, n >= 1. Got m={m}, s={Y.shape[0]}, n={n}.")
        names = tuple(str(name) for name in self.names) or tuple(f"DMU{j + 1}" for j in range(n))
        if len(names) != n:
            raise DimensionError(f"Expected {n} names, got {len(names)}.")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
            raise ValueError("Input and output values must be finite.")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.X.shape[1]

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def s(self) -> int:
        return self.Y.shape[0]

    @property
    def nonnegative(self) -> bool:
        return bool(np.all(self.X >= 0) and np.all(self.Y >= 0))

    def point(self, j: int) -> IOPoint:
        self._check_index(j)
        return IOPoint(self.X[:, j], self.Y[:, j])

    def reduced(self, o: int) -> "ReducedDataset":
        """Reference set of the technology that excludes unit o."""
        self._check_index(o)
        keep = [j for j in range(self.n) if j != o]
        X_o = self.X[:, keep]
        Y_o = self.Y[:, keep]
        X_o.setflags(write=False)
        Y_o.setflags(write=False)
        return ReducedDataset(base=self, excluded=o, X_o=X_o, Y_o=Y_o, index_map=tuple(keep))

    def translated(self, input_shift: Sequence[float], output_shift: Sequence[float]) -> "Dataset":
        a = np.broadcast_to(np.asarray(input_shift, dtype=float), (self.m,))
        b = np.broadcast_to(np.asarray(output_shift, dtype=float), (self.s,))
        return Dataset(self.X + a[:, None], self.Y + b[:, None], self.names)

    def scaled_row(self, kind: str, row: int, factor: float) -> "Dataset":
        """Multiply one input ("x") or output ("y") row by a positive factor."""
        if factor <= 0:
            raise ValueError("factor must be > 0.")
        X, Y = self.X.copy(), self.Y.copy()
        if kind == "x":
            X[row] *= factor
        elif kind == "y":
            Y[row] *= factor
        else:
            raise ValueError(f"kind must be 'x' or 'y', got '{kind}'.")
        return Dataset(X, Y, self.names)

    def _check_index(self, j: int):
        if not (0 <= j < self.n):
            raise IndexError(f"Unit index {j} out of range for n={self.n}.")


@dataclass(frozen=True, eq=False)
class ReducedDataset:
    """A dataset with unit `excluded` removed; index_map sends reduced columns to original ones."""

    base: Dataset
    excluded: int
    X_o: np.ndarray
    Y_o: np.ndarray
    index_map: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.index_map)


def _as_vector(v) -> np.ndarray:
    return np.atleast_1d(np.asarray(v, dtype=float))


def _same_length(u: np.ndarray, v: np.ndarray):
    if u.shape != v.shape:
        raise DimensionError(f"Length mismatch: {u.shape} vs {v.shape}.")


def _require_nonnegative(*vectors: np.ndarray, pos_tol: float):
    for v in vectors:
        if np.any(v < -pos_tol):
            raise UnsupportedRelationError(
                "The >+ relation and FGL dominance are only defined for nonnegative vectors."
            )


def n_plus(v, pos_tol: float = POS_TOL) -> int:
    """Number of components strictly greater than pos_tol."""
    return int(np.count_nonzero(_as_vector(v) > pos_tol))


def gt_plus(u, v, pos_tol: float = POS_TOL) -> bool:
    """u >+ v: every component has u_j > v_j, or u_j = v_j = 0."""
    u, v = _as_vector(u), _as_vector(v)
    _same_length(u, v)
    _require_nonnegative(u, v, pos_tol=pos_tol)
    strictly = u > v + pos_tol
    both_zero = (np.abs(u) <= pos_tol) & (np.abs(v) <= pos_tol)
    return bool(np.all(strictly | both_zero))


def _stacked(p, q) -> tuple[np.ndarray, np.ndarray]:
    xa, ya = _as_vector(p[0]), _as_vector(p[1])
    xb, yb = _as_vector(q[0]), _as_vector(q[1])
    _same_length(xa, xb)
    _same_length(ya, yb)
    return np.concatenate([-xa, ya]), np.concatenate([-xb, yb])


def weakly_pareto_dominates(a, b, pos_tol: float = POS_TOL) -> bool:
    """(-x_a, y_a) >= (-x_b, y_b) componentwise, and the two differ."""
    va, vb = _stacked(a, b)
    return bool(np.all(va >= vb - pos_tol) and np.any(va > vb + pos_tol))


def strongly_pareto_dominates(a, b, pos_tol: float = POS_TOL) -> bool:
    """Every component of (-x_a, y_a) strictly exceeds that of (-x_b, y_b)."""
    va, vb = _stacked(a, b)
    return bool(np.all(va > vb + pos_tol))


def fgl_dominates_input(a, b, pos_tol: float = POS_TOL) -> bool:
    """a dominates b in FGL sense with an input orientation: x_b >+ x_a and y_a >= y_b."""
    _stacked(a, b)
    _require_nonnegative(_as_vector(a[1]), _as_vector(b[1]), pos_tol=pos_tol)
    outputs_kept = np.all(_as_vector(a[1]) >= _as_vector(b[1]) - pos_tol)
    return bool(outputs_kept and gt_plus(b[0], a[0], pos_tol))


def fgl_dominates_output(a, b, pos_tol: float = POS_TOL) -> bool:
    """Output-oriented mirror: x_b >= x_a and y_a >+ y_b."""
    _stacked(a, b)
    _require_nonnegative(_as_vector(a[0]), _as_vector(b[0]), pos_tol=pos_tol)
    inputs_kept = np.all(_as_vector(b[0]) >= _as_vector(a[0]) - pos_tol)
    return bool(inputs_kept and gt_plus(a[1], b[1], pos_tol))


def positive_shift(ds: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Smallest integer row shifts that make every input and output at least 1."""
    input_shift = np.maximum(0.0, np.ceil(1.0 - ds.X.min(axis=1)))
    output_shift = np.maximum(0.0, np.ceil(1.0 - ds.Y.min(axis=1)))
    return input_shift, output_shift
