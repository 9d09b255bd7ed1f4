"""Numpy implementations of the statevector kernels.

Contract shared with the compiled backend:

* ``apply_block(state, dims, axes, matrix)``: apply a small unitary to the
  listed axes of the dense state tensor (C-order, ``axes[0]`` most
  significant in the matrix row index).  Returns the new flat state; the
  input array must not be reused afterwards.
* ``permute_rows(state, perm, row_size)``: view the state as
  ``(len(perm), row_size)`` and gather rows, ``out[r] = in[perm[r]]``.
"""

from __future__ import annotations

import math

import numpy as np


def apply_block(
    state: np.ndarray, dims: tuple[int, ...], axes: tuple[int, ...], matrix: np.ndarray
) -> np.ndarray:
    k = matrix.shape[0]
    if math.prod(dims[a] for a in axes) != k:
        raise ValueError("matrix size does not match the selected axes")
    t = state.reshape(dims)
    t = np.moveaxis(t, axes, range(len(axes)))
    lead = t.shape[: len(axes)]
    rest = t.shape[len(axes):]
    out = matrix @ t.reshape(k, -1)
    out = np.moveaxis(out.reshape(lead + rest), range(len(axes)), axes)
    return np.ascontiguousarray(out).reshape(-1)


def permute_rows(state: np.ndarray, perm: np.ndarray, row_size: int) -> np.ndarray:
    return np.ascontiguousarray(state.reshape(len(perm), row_size)[perm]).reshape(-1)
