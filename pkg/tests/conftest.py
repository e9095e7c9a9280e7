import numpy as np
import pytest

from util.core import Dataset, ToleranceConfig

TABLE1_NAMES = tuple("ABCDEFGH")
TABLE1_X = [[0, 2, 0, 0, 0, 2, 4, 4], [1, 1, 2, 1.5, 4, 1, 4, 4]]
TABLE1_Y = [[1, 2, 2, 1.5, 1, 1, 2, 1]]

TABLE4_X = [[-6, -6, -5, -4, -2, 1, -4, 2]]
TABLE4_Y = [[-3, 0, 2, 3, 5, 5, 0, 1]]


def unit(ds: Dataset, name: str) -> int:
    return ds.names.index(name)


@pytest.fixture
def table1() -> Dataset:
    return Dataset(np.array(TABLE1_X, dtype=float), np.array(TABLE1_Y, dtype=float), TABLE1_NAMES)


@pytest.fixture
def table4() -> Dataset:
    return Dataset(np.array(TABLE4_X, dtype=float), np.array(TABLE4_Y, dtype=float), TABLE1_NAMES)


@pytest.fixture
def twins() -> Dataset:
    return Dataset([[2.0, 2.0]], [[3.0, 3.0]], ("P", "Q"))


@pytest.fixture
def single() -> Dataset:
    return Dataset([[1.0]], [[1.0]], ("ONLY",))


@pytest.fixture
def config() -> ToleranceConfig:
    return ToleranceConfig()
