"""Block sensitivity and fractional block sensitivity with LP certificates.

``fbs(f, x)`` maximizes the total weight over opposite-value inputs ``y``
subject to a unit load per coordinate: for every j, the weights of all y
differing from x at j sum to at most 1.  Block sensitivity is the integral
restriction, computed exactly by disjoint-block set packing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import simplex
from .boolfn import BitString, BoolFnError, PartialFunction

FEAS_TOL = 1e-9
DUALITY_TOL = 1e-7
EXACT_ARITY_CAP = 8


class MeasureError(BoolFnError):
    """Measure undefined for the given function/point."""


@dataclass(frozen=True)
class FbsSolution:
    """Optimal weight assignment at a base point, with its dual certificate."""

    x: BitString
    weights: Mapping[BitString, float | Fraction]
    value: float | Fraction
    dual: tuple
    exact: bool = False

    def check_certificate(self, f: PartialFunction) -> None:
        """Raise unless primal feasible, dual feasible, and strongly dual."""
        n = f.n
        loads = [0.0] * n
        for y, w in self.weights.items():
            if w < -FEAS_TOL:
                raise MeasureError(f"negative weight {w} on {y}")
            for j in self.x.diff_positions(y):
                loads[j - 1] += w
        if any(load > 1 + FEAS_TOL for load in loads):
            raise MeasureError(f"primal infeasible: loads {loads}")
        if abs(sum(self.weights.values()) - self.value) > FEAS_TOL * max(1.0, float(self.value)):
            raise MeasureError("value does not match the weight total")
        if any(u < -FEAS_TOL for u in self.dual):
            raise MeasureError("negative dual value")
        fx = f.value(self.x)
        for y, v in f.entries.items():
            if v == fx:
                continue
            covered = sum(self.dual[j - 1] for j in self.x.diff_positions(y))
            if covered < 1 - FEAS_TOL:
                raise MeasureError(f"dual infeasible at {y}: coverage {covered}")
        if abs(sum(self.dual) - self.value) > DUALITY_TOL:
            raise MeasureError(
                f"duality gap: primal {self.value}, dual {sum(self.dual)}"
            )


def sensitive_blocks(f: PartialFunction, x: BitString | str) -> tuple[int, ...]:
    """Sensitive blocks at x as coordinate bitmasks (bit j-1 set for position j)."""
    xb = BitString.coerce(x)
    masks = []
    for y in f.opposite_inputs(xb):
        mask = 0
        for j in xb.diff_positions(y):
            mask |= 1 << (j - 1)
        masks.append(mask)
    return tuple(sorted(set(masks)))


def block_sensitivity(f: PartialFunction, x: BitString | str) -> int:
    """Maximum number of pairwise disjoint sensitive blocks at x."""
    masks = sensitive_blocks(f, x)
    if not masks:
        return 0
    # A packing over minimal sensitive blocks achieves the optimum: any block
    # in a packing can be replaced by a minimal sensitive block inside it.
    minimal = [m for m in masks if not any(o != m and o & ~m == 0 for o in masks)]
    minimal.sort(key=lambda m: m.bit_count())
    memo: dict[int, int] = {}

    def best(avail: int) -> int:
        if avail in memo:
            return memo[avail]
        out = 0
        for m in minimal:
            if m & ~avail == 0:
                out = max(out, 1 + best(avail & ~m))
        memo[avail] = out
        return out

    return best((1 << f.n) - 1)


def _lp_data(f: PartialFunction, x: BitString) -> tuple[np.ndarray, np.ndarray]:
    bits, vals = f.arrays()
    fx = f.value(x)
    opp = np.flatnonzero(vals != fx)
    xbits = np.array(x.bits, dtype=np.uint8)
    A = (bits[opp] ^ xbits).T.astype(np.float64)  # constraint row j: ys differing at j
    return opp, A


def fbs(
    f: PartialFunction,
    x: BitString | str,
    exact: bool = False,
    tol: float = simplex.PIVOT_TOL,
) -> FbsSolution:
    """Fractional block sensitivity at x, with weights and dual certificate."""
    xb = BitString.coerce(x)
    f.value(xb)  # domain check
    opp, A = _lp_data(f, xb)
    if opp.size == 0:
        zeros = (Fraction(0),) * f.n if exact else (0.0,) * f.n
        return FbsSolution(
            x=xb,
            weights={},
            value=Fraction(0) if exact else 0.0,
            dual=zeros,
            exact=exact,
        )
    if exact:
        if f.n > EXACT_ARITY_CAP:
            raise MeasureError(f"exact mode supports arity <= {EXACT_ARITY_CAP}")
        sol = simplex.solve_exact(
            [Fraction(1)] * opp.size,
            [[Fraction(int(v)) for v in row] for row in A],
            [Fraction(1)] * f.n,
        )
    else:
        sol = simplex.solve_float(np.ones(opp.size), A, np.ones(f.n), tol=tol)
    domain = f.domain()
    weights = {domain[i]: w for i, w in zip(opp, sol.weights) if w > 0}
    return FbsSolution(x=xb, weights=weights, value=sol.value, dual=sol.dual, exact=exact)


def fbs_global(f: PartialFunction, exact: bool = False) -> tuple[float | Fraction, BitString]:
    """Maximum fbs over the declared domain; ties go to the smallest x."""
    if not f.d0 or not f.d1:
        raise MeasureError(f"{f.name} is constant on its domain")
    best_value: float | Fraction | None = None
    best_x: BitString | None = None
    for x in f.domain():
        value = fbs(f, x, exact=exact).value
        if best_value is None or value > best_value + (0 if exact else FEAS_TOL):
            best_value, best_x = value, x
    assert best_value is not None and best_x is not None
    return best_value, best_x
