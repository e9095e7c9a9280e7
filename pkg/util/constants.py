"""Project-wide constant values."""

__all__ = [
    "FEAS_TOL",
    "POS_TOL",
    "BINARY_THRESHOLD",
    "MAX_ITERATIONS",
    "DEGENERATE_SWITCH_FACTOR",
    "TOL_ENV_VAR",
    "EXAMPLES",
]

# Solver feasibility / optimality tolerance
FEAS_TOL: float = 1e-9

# Strict-positivity threshold for data, slacks and radial scores
POS_TOL: float = 1e-7

# Indicator values of the unified model are read as 1 above this cutoff
BINARY_THRESHOLD: float = 0.5

# Simplex iteration cap (both phases together)
MAX_ITERATIONS: int = 10_000

# Dantzig pricing falls back to Bland after this many degenerate pivots per (rows + cols)
DEGENERATE_SWITCH_FACTOR: int = 3

TOL_ENV_VAR: str = "DEA_TOL"

# Bundled datasets: two-input/one-output example and the mixed-sign example
EXAMPLES: dict[str, str] = {
    "4.1": "example41.csv",
    "4.2": "example42.csv",
}
