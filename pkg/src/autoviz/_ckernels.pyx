# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: Gaussian KDE grid evaluation and the partial
Euclidean distances used by KNN imputation.

Contract matches :mod:`autoviz._kernels_py` exactly; the Python backend is
the reference in the kernel tests.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt, INFINITY

cnp.import_array()

cdef double SQRT_2PI = sqrt(2.0 * 3.14159265358979323846)


def kde_gaussian(object values, object grid, double h):
    """Evaluate a Gaussian-kernel density estimate on ``grid``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.ascontiguousarray(grid, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t m = g.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(m, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double u, acc, norm = 1.0 / (n * h * SQRT_2PI)
    for j in range(m):
        acc = 0.0
        for i in range(n):
            u = (g[j] - v[i]) / h
            acc += exp(-0.5 * u * u)
        out[j] = acc * norm
    return out


def masked_distances(object x, object present, Py_ssize_t row):
    """Partial Euclidean distances from ``row`` to every row of ``x``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] pm = np.ascontiguousarray(present, dtype=np.uint8)
    cdef Py_ssize_t n = xa.shape[0]
    cdef Py_ssize_t p = xa.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, j, used
    cdef double sq, d
    if p == 0:
        out[:] = INFINITY
        return out
    for i in range(n):
        sq = 0.0
        used = 0
        for j in range(p):
            if pm[i, j] and pm[row, j]:
                d = xa[i, j] - xa[row, j]
                sq += d * d
                used += 1
        if used == 0:
            out[i] = INFINITY
        else:
            out[i] = sqrt(sq * (<double>p / <double>used))
    return out
