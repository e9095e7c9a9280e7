"""Seeded random dataset generation."""

__all__ = ["random_dataset"]

import numpy as np

from util.core import Dataset


def random_dataset(
    seed: int | np.random.Generator,
    n: int,
    m: int,
    s: int,
    zero_density: float = 0.0,
    negative_shift: float = 0.0,
    low: int = 1,
) -> Dataset:
    """
    Generate an n-unit dataset with integer entries drawn uniformly from [low, 9].

    Each entry is independently set to 0 with probability zero_density, then negative_shift
    is subtracted from every entry. With the default low and zero_density=0 the data are strictly
    positive.
    """
    if n < 1 or m < 1 or s < 1:
        raise ValueError(f"Need n, m, s >= 1. Got n={n}, m={m}, s={s}.")
    if not (0.0 <= zero_density <= 1.0):
        raise ValueError("zero_density must be in [0,1].")
    if not (0 <= low <= 9):
        raise ValueError("low must be in [0,9].")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    values = rng.integers(low, 10, size=(m + s, n)).astype(float)
    values[rng.random(size=values.shape) < zero_density] = 0.0
    values -= negative_shift
    return Dataset(X=values[:m], Y=values[m:])
