# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled scoring kernels.

Must stay numerically identical to ``_pykernels``: the same per-element IEEE
operations, clips written as ``v if v > 0 else 0`` (so -0.0 maps to +0.0),
and left-to-right row summation.  Built without fast-math for that reason.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def clip_standardize(const double[:, ::1] values,
                     const double[::1] means,
                     const double[::1] stds):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t m = values.shape[1]
    out_arr = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, k
    cdef double z
    for i in range(n):
        for k in range(m):
            if stds[k] > 0.0:
                z = (values[i, k] - means[k]) / stds[k]
                out[i, k] = z if z > 0.0 else 0.0
            else:
                out[i, k] = 0.0
    return out_arr


def influence(const double[::1] beta, const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t m = x.shape[1]
    weights_arr = np.empty((n, m), dtype=np.float64)
    sums_arr = np.empty(n, dtype=np.float64)
    active_arr = np.empty(n, dtype=np.bool_)
    cdef double[:, ::1] w = weights_arr
    cdef double[::1] sums = sums_arr
    cdef unsigned char[::1] active = active_arr.view(np.uint8)
    cdef Py_ssize_t i, k
    cdef double p, s
    for i in range(n):
        s = 0.0
        for k in range(m):
            p = beta[k] * x[i, k]
            p = p if p > 0.0 else 0.0
            w[i, k] = p
            s = s + p
        sums[i] = s
        if s > 0.0:
            active[i] = 1
            for k in range(m):
                w[i, k] = w[i, k] / s
        else:
            active[i] = 0
    return weights_arr, sums_arr, active_arr
