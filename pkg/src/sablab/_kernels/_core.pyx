# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels: small-unitary application and row gathers.

Same contract as ``_pykernels``; see that module for the documentation.
"""

import math

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF MAX_BLOCK = 64


def apply_block(state, dims, axes, matrix):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] vec = np.ascontiguousarray(state, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] mat = np.ascontiguousarray(matrix, dtype=np.complex128)
    cdef Py_ssize_t k = mat.shape[0]
    if math.prod(dims[a] for a in axes) != k:
        raise ValueError("matrix size does not match the selected axes")
    if k > MAX_BLOCK:
        raise ValueError(f"block dimension {k} exceeds {MAX_BLOCK}")

    # A leading axis prefix reshapes to (k, rest) without any copy; BLAS wins
    # there.  The strided C loop below wins on interior axes, where the numpy
    # route would materialize two transposed copies of the state.
    if tuple(axes) == tuple(range(len(axes))):
        return np.ascontiguousarray(mat @ vec.reshape(k, -1)).reshape(-1)

    # Element strides per axis in C order, then offset tables for the selected
    # axes (matrix index) and the complementary axes (group base offsets).
    nax = len(dims)
    strides = [0] * nax
    acc = 1
    for a in range(nax - 1, -1, -1):
        strides[a] = acc
        acc *= dims[a]
    sel = list(axes)
    rest = [a for a in range(nax) if a not in set(sel)]
    sub_np = _offsets([dims[a] for a in sel], [strides[a] for a in sel])
    base_np = _offsets([dims[a] for a in rest], [strides[a] for a in rest])

    cdef cnp.ndarray[cnp.int64_t, ndim=1] sub = sub_np
    cdef cnp.ndarray[cnp.int64_t, ndim=1] base = base_np
    cdef Py_ssize_t groups = base.shape[0]
    cdef double complex tmp[MAX_BLOCK]
    cdef double complex acc_c
    cdef Py_ssize_t g, r, c
    cdef cnp.int64_t off
    with nogil:
        for g in range(groups):
            off = base[g]
            for r in range(k):
                tmp[r] = vec[off + sub[r]]
            for r in range(k):
                acc_c = 0
                for c in range(k):
                    acc_c = acc_c + mat[r, c] * tmp[c]
                vec[off + sub[r]] = acc_c
    return vec


def permute_rows(state, perm, row_size):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] vec = np.ascontiguousarray(state, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] p = np.ascontiguousarray(perm, dtype=np.int64)
    cdef Py_ssize_t rows = p.shape[0]
    cdef Py_ssize_t width = row_size
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(rows * width, dtype=np.complex128)
    cdef Py_ssize_t r, c
    cdef cnp.int64_t src
    with nogil:
        for r in range(rows):
            src = p[r] * width
            for c in range(width):
                out[r * width + c] = vec[src + c]
    return out


def _offsets(dims, strides):
    out = np.zeros(1, dtype=np.int64)
    for d, s in zip(dims, strides):
        out = (out[:, None] + np.arange(d, dtype=np.int64) * s).reshape(-1)
    return out
