"""Dense tableau simplex for small LPs of the form max c.w s.t. Aw <= b, w >= 0.

Two arithmetic modes share the pivoting logic shape:

* float mode: numpy tableau, 1e-9 pivot tolerance.  The entering rule is
  steepest-coefficient for speed; whenever the objective stalls (degenerate
  pivots) the solver engages Bland's anti-cycling rule until progress resumes,
  so termination is guaranteed.
* exact mode: ``fractions.Fraction`` tableau with Bland's rule throughout.

Both modes return the dual vector read off the optimal tableau (the reduced
costs of the slack columns), which certifies optimality via strong duality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

PIVOT_TOL = 1e-9
_STALL_LIMIT = 12
_MAX_PIVOTS = 50_000


class SimplexError(RuntimeError):
    """Unbounded problem or pivot-limit exhaustion."""


@dataclass(frozen=True)
class LpSolution:
    """Primal/dual optimum of max c.w s.t. Aw <= b, w >= 0."""

    value: float | Fraction
    weights: tuple
    dual: tuple
    pivots: int
    exact: bool

    def dual_value(self, b: Sequence) -> float | Fraction:
        return sum(u * bi for u, bi in zip(self.dual, b))


def solve_float(
    c: np.ndarray, A: np.ndarray, b: np.ndarray, tol: float = PIVOT_TOL
) -> LpSolution:
    """Float-mode simplex.  Requires b >= 0 (the all-slack basis is feasible)."""
    A = np.asarray(A, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n_rows, n_vars = A.shape
    if b.min(initial=0.0) < 0:
        raise SimplexError("negative right-hand side; all-slack basis infeasible")

    # Tableau columns: structural variables then slacks.
    T = np.hstack([A, np.eye(n_rows)])
    rhs = b.astype(np.float64).copy()
    zrow = np.concatenate([-c, np.zeros(n_rows)])
    zval = 0.0
    basis = list(range(n_vars, n_vars + n_rows))

    pivots = 0
    stall = 0
    bland = False
    while True:
        neg = np.flatnonzero(zrow < -tol)
        if neg.size == 0:
            break
        if bland:
            enter = int(neg[0])
        else:
            enter = int(np.argmin(zrow))
        col = T[:, enter]
        pos = np.flatnonzero(col > tol)
        if pos.size == 0:
            raise SimplexError("unbounded linear program")
        ratios = rhs[pos] / col[pos]
        best = ratios.min()
        ties = pos[np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))]
        leave = int(min(ties, key=lambda i: basis[i]))

        piv = T[leave, enter]
        T[leave] /= piv
        rhs[leave] /= piv
        factors = T[:, enter].copy()
        factors[leave] = 0.0
        T -= np.outer(factors, T[leave])
        rhs -= factors * rhs[leave]
        gain = -zrow[enter] * rhs[leave]
        zval += gain
        zrow = zrow - zrow[enter] * T[leave]
        basis[leave] = enter

        pivots += 1
        if pivots > _MAX_PIVOTS:
            raise SimplexError("pivot limit exceeded")
        if gain <= tol:
            stall += 1
            if stall >= _STALL_LIMIT:
                bland = True
        else:
            stall = 0
            bland = False

    weights = np.zeros(n_vars)
    for i, var in enumerate(basis):
        if var < n_vars:
            weights[var] = rhs[i]
    weights[np.abs(weights) < tol] = 0.0
    dual = zrow[n_vars:].copy()
    dual[np.abs(dual) < tol] = 0.0
    return LpSolution(
        value=float(zval),
        weights=tuple(float(w) for w in weights),
        dual=tuple(float(u) for u in dual),
        pivots=pivots,
        exact=False,
    )


def solve_exact(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LpSolution:
    """Exact rational simplex with Bland's rule (entering and leaving)."""
    n_rows = len(A)
    n_vars = len(c)
    T = [[Fraction(A[i][j]) for j in range(n_vars)] + [Fraction(int(i == k)) for k in range(n_rows)] for i in range(n_rows)]
    rhs = [Fraction(v) for v in b]
    if any(v < 0 for v in rhs):
        raise SimplexError("negative right-hand side; all-slack basis infeasible")
    zrow = [-Fraction(v) for v in c] + [Fraction(0)] * n_rows
    zval = Fraction(0)
    basis = list(range(n_vars, n_vars + n_rows))
    total = n_vars + n_rows

    pivots = 0
    while True:
        enter = next((j for j in range(total) if zrow[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(n_rows):
            if T[i][enter] > 0:
                ratio = rhs[i] / T[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise SimplexError("unbounded linear program")

        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        rhs[leave] /= piv
        for i in range(n_rows):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [vi - f * vl for vi, vl in zip(T[i], T[leave])]
                rhs[i] -= f * rhs[leave]
        f = zrow[enter]
        zrow = [vi - f * vl for vi, vl in zip(zrow, T[leave])]
        zval -= f * rhs[leave]
        basis[leave] = enter

        pivots += 1
        if pivots > _MAX_PIVOTS:
            raise SimplexError("pivot limit exceeded")

    weights = [Fraction(0)] * n_vars
    for i, var in enumerate(basis):
        if var < n_vars:
            weights[var] = rhs[i]
    dual = tuple(zrow[n_vars:])
    return LpSolution(
        value=zval, weights=tuple(weights), dual=dual, pivots=pivots, exact=True
    )
