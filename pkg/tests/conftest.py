"""Shared strategies and brute-force reference helpers."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from sablab.boolfn import BitString, PartialFunction, all_bitstrings


@st.composite
def bitstrings(draw, min_size: int = 1, max_size: int = 6) -> BitString:
    bits = draw(st.lists(st.integers(0, 1), min_size=min_size, max_size=max_size))
    return BitString(tuple(bits))


@st.composite
def partial_functions(draw, max_arity: int = 4) -> PartialFunction:
    """Random non-constant partial function with at least two domain points."""
    n = draw(st.integers(2, max_arity))
    universe = list(all_bitstrings(n))
    included = draw(
        st.lists(st.booleans(), min_size=len(universe), max_size=len(universe))
    )
    domain = [x for x, keep in zip(universe, included) if keep]
    if len(domain) < 2:
        domain = universe[:2]
    values = draw(
        st.lists(st.integers(0, 1), min_size=len(domain), max_size=len(domain))
    )
    if len(set(values)) < 2:
        values[0] = 1 - values[1]
    return PartialFunction("random", n, dict(zip(domain, values)))


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def oracle_matrix(oracle, dim_rows: int, row_size: int = 1) -> np.ndarray:
    """Materialize an oracle's permutation by applying it to basis vectors."""
    dim = dim_rows * row_size
    m = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        e = np.zeros(dim, dtype=np.complex128)
        e[col] = 1.0
        m[:, col] = oracle.apply(e)
    return m
