"""Shared fixtures: the 6x6 two-qubit-times-qutrit counterexample state and rngs."""

from __future__ import annotations

import numpy as np
import pytest

from absred import BipartiteDims, DensityMatrix

RHO32_ROWS = [
    [110, 30 - 39j, 40 - 81j, 48 + 37j, 70 - 15j, 12 + 1j],
    [30 + 39j, 128, 66 - 1j, 42 - 33j, 134 + 5j, 18 - 11j],
    [40 + 81j, 66 + 1j, 174, 28 + 73j, 96 + 29j, 30 + 47j],
    [48 - 37j, 42 + 33j, 28 - 73j, 188, 110 - 13j, 40 + 1j],
    [70 + 15j, 134 - 5j, 96 - 29j, 110 + 13j, 226, 48 + 47j],
    [12 - 1j, 18 + 11j, 30 - 47j, 40 - 1j, 48 - 47j, 174],
]


@pytest.fixture(scope="session")
def rho32_matrix() -> np.ndarray:
    return np.array(RHO32_ROWS, dtype=complex) / 1000


@pytest.fixture(scope="session")
def rho32(rho32_matrix) -> DensityMatrix:
    return DensityMatrix(BipartiteDims(3, 2), rho32_matrix)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260809)
