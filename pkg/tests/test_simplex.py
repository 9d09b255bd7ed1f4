"""Simplex solver on hand-checked LPs, degenerate cases, and both modes."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from sablab.simplex import SimplexError, solve_exact, solve_float


def test_textbook_lp():
    # max 3a + 2b s.t. a + b <= 4, a + 3b <= 6 -> optimum 12 at (4, 0)
    sol = solve_float(np.array([3.0, 2.0]), np.array([[1.0, 1.0], [1.0, 3.0]]), np.array([4.0, 6.0]))
    assert abs(sol.value - 12.0) < 1e-9
    assert abs(sol.weights[0] - 4.0) < 1e-9 and abs(sol.weights[1]) < 1e-9
    assert abs(sol.dual_value([4.0, 6.0]) - sol.value) < 1e-9


def test_exact_matches_float():
    c = [2, 3, 1]
    A = [[1, 1, 1], [1, 2, 0], [0, 1, 1]]
    b = [10, 8, 7]
    f = solve_float(np.array(c, dtype=float), np.array(A, dtype=float), np.array(b, dtype=float))
    e = solve_exact([Fraction(v) for v in c], [[Fraction(v) for v in row] for row in A], [Fraction(v) for v in b])
    assert abs(f.value - float(e.value)) < 1e-9
    assert abs(f.dual_value(b) - f.value) < 1e-7
    assert e.dual_value(b) == e.value


def test_degenerate_lp_terminates():
    # Many ties in the ratio test; Bland's rule must still terminate.
    c = [1.0, 1.0, 1.0, 1.0]
    A = [[1.0, 1.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0], [0.0, 0.0, 1.0, 1.0], [1.0, 0.0, 0.0, 1.0]]
    b = [1.0, 1.0, 1.0, 1.0]
    sol = solve_float(np.array(c), np.array(A), np.array(b))
    assert abs(sol.value - 2.0) < 1e-9
    e = solve_exact(
        [Fraction(1)] * 4,
        [[Fraction(int(v)) for v in row] for row in A],
        [Fraction(1)] * 4,
    )
    assert e.value == 2


def test_unbounded_detected():
    with pytest.raises(SimplexError):
        solve_float(np.array([1.0, 0.0]), np.array([[0.0, 1.0]]), np.array([1.0]))


def test_negative_rhs_rejected():
    with pytest.raises(SimplexError):
        solve_float(np.array([1.0]), np.array([[1.0]]), np.array([-1.0]))


def test_dual_feasibility():
    rng = np.random.default_rng(7)
    for _ in range(25):
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 5))
        A = rng.integers(0, 2, size=(n, m)).astype(float)
        A[:, 0] = np.maximum(A[:, 0], 1.0)  # keep the LP bounded
        A[0, :] = np.maximum(A[0, :], 1.0)
        c = np.ones(m)
        b = np.ones(n)
        sol = solve_float(c, A, b)
        dual = np.array(sol.dual)
        assert dual.min() >= -1e-9
        assert (A.T @ dual - c).min() >= -1e-9  # dual feasible
        assert abs(sol.dual_value(b) - sol.value) < 1e-7  # strong duality
        w = np.array(sol.weights)
        assert w.min() >= -1e-12
        assert (A @ w - b).max() <= 1e-9  # primal feasible
