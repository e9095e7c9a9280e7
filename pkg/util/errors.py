"""Exception types raised across the toolkit."""

__all__ = [
    "DimensionError",
    "UnsupportedRelationError",
    "PreconditionError",
    "DatasetParseError",
    "SolverStallError",
    "ModelError",
]


class DimensionError(ValueError):
    """Vectors or matrices with incompatible shapes."""


class UnsupportedRelationError(ValueError):
    """A relation that is only defined for nonnegative vectors received negative data."""


class PreconditionError(ValueError):
    """An operation was called outside its precondition."""


class DatasetParseError(ValueError):
    """Malformed dataset file."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column '{column}'")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.row = row
        self.column = column


class SolverStallError(RuntimeError):
    """The simplex iteration cap was exceeded."""


class ModelError(RuntimeError):
    """A solver verdict that the model structure rules out."""
