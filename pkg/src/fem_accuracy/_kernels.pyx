# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation loops for barycentric polynomials.

Same contract as _kernels_py: a polynomial is a list of terms, term t being
coeffs[t] * prod_v points[:, v] ** exps[t, v].  Exponents are small
nonnegative integers, so powers are computed by repeated multiplication.
"""

import numpy as np


def eval_terms(double[:, ::1] points, long long[:, ::1] exps, double[::1] coeffs):
    """Evaluate one term-list polynomial at many points.

    points : (npts, nvars) float64, C-contiguous
    exps   : (nterms, nvars) int64
    coeffs : (nterms,) float64
    returns (npts,) float64
    """
    cdef Py_ssize_t npts = points.shape[0]
    cdef Py_ssize_t nvars = points.shape[1]
    cdef Py_ssize_t nterms = exps.shape[0]
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, t, v
    cdef long long e
    cdef double acc, term, x
    for i in range(npts):
        acc = 0.0
        for t in range(nterms):
            term = coeffs[t]
            for v in range(nvars):
                e = exps[t, v]
                x = points[i, v]
                while e > 0:
                    term *= x
                    e -= 1
            acc += term
        out[i] = acc
    return out_arr


def max_abs_eval(double[:, ::1] points, long long[:, ::1] exps, double[::1] coeffs):
    """max(|polynomial|) over the given points, without allocating the values."""
    cdef Py_ssize_t npts = points.shape[0]
    cdef Py_ssize_t nvars = points.shape[1]
    cdef Py_ssize_t nterms = exps.shape[0]
    cdef Py_ssize_t i, t, v
    cdef long long e
    cdef double acc, term, x, best = 0.0
    for i in range(npts):
        acc = 0.0
        for t in range(nterms):
            term = coeffs[t]
            for v in range(nvars):
                e = exps[t, v]
                x = points[i, v]
                while e > 0:
                    term *= x
                    e -= 1
            acc += term
        if acc < 0.0:
            acc = -acc
        if acc > best:
            best = acc
    return best
