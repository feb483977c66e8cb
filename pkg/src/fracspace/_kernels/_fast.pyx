# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend.

Contract mirrors _ref.py; the inner loop is the hot path of interpolation
norm quadrature (one K^2 evaluation per panel node per refinement pass).
"""
import numpy as np


def k2_batch(lam, c2, ts):
    """K(u,t)^2 for a spectral pair at many t. See _ref.k2_batch."""
    # const views: model arrays arrive with the writeable flag cleared
    cdef const double[::1] lam_v = np.ascontiguousarray(lam, dtype=np.float64)
    cdef const double[::1] c2_v = np.ascontiguousarray(c2, dtype=np.float64)
    cdef const double[::1] ts_v = np.ascontiguousarray(ts, dtype=np.float64)
    out = np.empty(ts_v.shape[0], dtype=np.float64)
    cdef double[::1] out_v = out
    cdef Py_ssize_t i, j, p = ts_v.shape[0], m = lam_v.shape[0]
    cdef double t2, w, acc
    with nogil:
        for i in range(p):
            t2 = ts_v[i] * ts_v[i]
            acc = 0.0
            for j in range(m):
                w = t2 * lam_v[j] * lam_v[j]
                acc += w / (1.0 + w) * c2_v[j]
            out_v[i] = acc
    return out
