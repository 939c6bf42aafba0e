# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: top-k selection and LCS length.

Semantics match _pykernels exactly (deterministic tie-breaks toward the
lower index).
"""

import numpy as np
cimport numpy as cnp


def topk_indices(row, int k):
    """Indices of the k largest entries, descending; ties -> lower index."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r = np.ascontiguousarray(row, dtype=np.float64)
    cdef Py_ssize_t n = r.shape[0]
    if k > n:
        k = n
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(k, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] taken = np.zeros(n, dtype=np.uint8)
    cdef double best
    cdef Py_ssize_t i, j, bi
    # selection scan: O(k*n), beats sorting for the small k the decoder uses
    for i in range(k):
        bi = -1
        best = 0.0
        for j in range(n):
            if taken[j]:
                continue
            if bi < 0 or r[j] > best:
                bi = j
                best = r[j]
        taken[bi] = 1
        out[i] = bi
    return out


def lcs_length(a, b):
    """Length of the longest common subsequence of two id sequences."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] x = np.ascontiguousarray(a, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] y = np.ascontiguousarray(b, dtype=np.int64)
    if x.shape[0] < y.shape[0]:
        x, y = y, x
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0]
    if m == 0:
        return 0
    cdef cnp.ndarray[cnp.int64_t, ndim=1] prev = np.zeros(m + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cur = np.zeros(m + 1, dtype=np.int64)
    cdef Py_ssize_t i, j
    cdef cnp.int64_t left, up
    for i in range(n):
        cur[0] = 0
        for j in range(m):
            if x[i] == y[j]:
                cur[j + 1] = prev[j] + 1
            else:
                left = cur[j]
                up = prev[j + 1]
                cur[j + 1] = left if left >= up else up
        prev, cur = cur, prev
    return int(prev[m])
