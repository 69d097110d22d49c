# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled loops for band lookup, single-pass training and scoring.

Inputs are validated by :mod:`bandgrid.kernels`; nothing here checks shapes
or NaNs. Each function matches its counterpart in ``_kernels_py`` bit for bit:
additions into a given slot happen in the same row and variable order.
"""
import numpy as np

cdef enum:
    _RATIO = 0
    _PRODUCT = 1

RATIO = _RATIO
PRODUCT = _PRODUCT


def band_indices(const double[:, ::1] values, const double[:, ::1] edges,
                 const Py_ssize_t[::1] n_bands):
    cdef Py_ssize_t n_rows = values.shape[0], n_vars = values.shape[1]
    cdef Py_ssize_t r, v, lo, hi, mid
    cdef double x
    result = np.empty((n_rows, n_vars), dtype=np.intp)
    cdef Py_ssize_t[:, ::1] out = result
    with nogil:
        for r in range(n_rows):
            for v in range(n_vars):
                x = values[r, v]
                # smallest i with x <= edges[v, i]; last band catches the rest
                lo = 0
                hi = n_bands[v] - 1
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if x <= edges[v, mid]:
                        hi = mid
                    else:
                        lo = mid + 1
                out[r, v] = lo
    return result


def train_rows(const Py_ssize_t[:, ::1] bands, const Py_ssize_t[::1] labels,
               double[:, ::1] scale, double[:, :, ::1] outputs,
               double cw, const double[::1] ow):
    cdef Py_ssize_t n_rows = bands.shape[0], n_vars = bands.shape[1]
    cdef Py_ssize_t r, v, b, lab, touched = 0
    cdef double inc
    with nogil:
        for r in range(n_rows):
            lab = labels[r]
            inc = ow[lab]
            for v in range(n_vars):
                b = bands[r, v]
                scale[v, b] += cw
                outputs[v, b, lab] += inc
                touched += 1
    return touched


def score_rows(const Py_ssize_t[:, ::1] bands, const double[:, ::1] values,
               const double[:, ::1] scale, const double[:, :, ::1] outputs,
               int mode):
    cdef Py_ssize_t n_rows = bands.shape[0], n_vars = bands.shape[1]
    cdef Py_ssize_t n_cats = outputs.shape[2]
    cdef Py_ssize_t r, v, c, b
    cdef double s, f
    result = np.zeros((n_rows, n_cats), dtype=np.float64)
    cdef double[:, ::1] ov = result
    with nogil:
        for r in range(n_rows):
            for v in range(n_vars):
                b = bands[r, v]
                s = scale[v, b]
                if mode == _RATIO:
                    if s == 0.0:
                        continue
                    for c in range(n_cats):
                        ov[r, c] += outputs[v, b, c] / s
                else:
                    f = values[r, v] * s
                    for c in range(n_cats):
                        ov[r, c] += f * outputs[v, b, c]
    return result
