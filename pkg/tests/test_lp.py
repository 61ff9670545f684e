"""Phase-1 simplex feasibility: exactness on small systems and
deterministic output."""

import numpy as np
import pytest

from baru.lp import FEAS_TOL, feasible_point


def test_simple_feasible_system():
    A = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]])
    b = np.array([1.0, 1.0])
    x = feasible_point(A, b)
    assert x is not None
    assert np.all(x >= -1e-12)
    assert np.abs(A @ x - b).max() <= FEAS_TOL


def test_infeasible_system_returns_none():
    # x1 + x2 = 1 and x1 + x2 = 2 cannot both hold
    A = np.array([[1.0, 1.0], [1.0, 1.0]])
    b = np.array([1.0, 2.0])
    assert feasible_point(A, b) is None


def test_negative_rhs_handled_by_row_flip():
    A = np.array([[-1.0, 0.0], [0.0, 1.0]])
    b = np.array([-0.5, 0.25])
    x = feasible_point(A, b)
    assert x is not None
    assert x[0] == pytest.approx(0.5, abs=1e-12)
    assert x[1] == pytest.approx(0.25, abs=1e-12)


def test_nonnegativity_blocks_sign_infeasible_system():
    # x1 - x2 = -1 with a second row forcing x2 = 0 leaves no x1 >= 0
    A = np.array([[1.0, -1.0], [0.0, 1.0]])
    b = np.array([-1.0, 0.0])
    assert feasible_point(A, b) is None


def test_zero_rows_shape():
    x = feasible_point(np.zeros((0, 4)), np.zeros(0))
    assert x is not None and x.shape == (4,)


def test_shape_validation():
    with pytest.raises(ValueError):
        feasible_point(np.zeros((2, 2)), np.zeros(3))
    with pytest.raises(ValueError):
        feasible_point(np.zeros(4), np.zeros(2))


def test_determinism_on_repeated_call():
    rng = np.random.default_rng(5150)
    A = rng.normal(size=(6, 14))
    x0 = np.abs(rng.normal(size=14))
    b = A @ x0  # feasible by construction
    first = feasible_point(A, b)
    assert first is not None
    for _ in range(5):
        again = feasible_point(A, b)
        assert again is not None
        assert np.array_equal(first, again)


def test_random_feasible_batch():
    rng = np.random.default_rng(77)
    for _ in range(50):
        m, n = rng.integers(1, 7), rng.integers(2, 16)
        A = rng.normal(size=(m, n))
        x0 = np.abs(rng.normal(size=n))
        b = A @ x0
        x = feasible_point(A, b)
        assert x is not None
        assert np.all(x >= -1e-10)
        assert np.abs(A @ x - b).max() <= 1e-8


def test_degenerate_duplicate_rows_fine():
    A = np.array([[1.0, 2.0], [1.0, 2.0], [2.0, 4.0]])
    b = np.array([3.0, 3.0, 6.0])
    x = feasible_point(A, b)
    assert x is not None
    assert np.abs(A @ x - b).max() <= FEAS_TOL
