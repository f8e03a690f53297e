# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror :mod:`relaxround._pykernels`."""

from libc.math cimport exp, log, floor
from libc.stdint cimport int64_t

import numpy as np


def smooth_eval(const double[::1] x,
                const int64_t[::1] indptr,
                const int64_t[::1] indices,
                const double[::1] weights,
                const int64_t[::1] npieces,
                const double[::1] pslope,
                const double[::1] picpt,
                double mu,
                double[::1] grad=None):
    """LSE-smoothed coverage value; fills ``grad`` (if given) with its gradient.

    Right nodes are visited in ascending order and the gradient is
    accumulated sequentially, so results are bitwise reproducible.
    """
    cdef Py_ssize_t r = indptr.shape[0] - 1
    cdef Py_ssize_t j, t, p, P
    cdef double y, e, emax, s, ey, val, total = 0.0, wj, contrib
    cdef bint want_grad = grad is not None
    if want_grad:
        grad[:] = 0.0
    for j in range(r):
        y = 0.0
        for t in range(indptr[j], indptr[j + 1]):
            y += x[indices[t]]
        P = npieces[j]
        wj = weights[j]
        if P == 1:
            val = pslope[0] * y + picpt[0]
            ey = pslope[0]
        else:
            emax = -(pslope[0] * y + picpt[0]) / mu
            for p in range(1, P):
                e = -(pslope[p] * y + picpt[p]) / mu
                if e > emax:
                    emax = e
            s = 0.0
            ey = 0.0
            for p in range(P):
                e = exp(-(pslope[p] * y + picpt[p]) / mu - emax)
                s += e
                ey += e * pslope[p]
            val = -mu * (emax + log(s))
            ey = ey / s
        total += wj * val
        if want_grad:
            contrib = wj * ey
            for t in range(indptr[j], indptr[j + 1]):
                grad[indices[t]] += contrib
    return total


def fractional_eval(const double[::1] x,
                    const int64_t[::1] indptr,
                    const int64_t[::1] indices,
                    const double[::1] weights,
                    const double[::1] phi_tab):
    """Sum of ``w_j * phi_ext(y_j)`` with ``y_j`` the load on right node ``j``."""
    cdef Py_ssize_t r = indptr.shape[0] - 1
    cdef Py_ssize_t j, t, lo
    cdef Py_ssize_t top = phi_tab.shape[0] - 2
    cdef double y, fr, total = 0.0
    for j in range(r):
        y = 0.0
        for t in range(indptr[j], indptr[j + 1]):
            y += x[indices[t]]
        if y < 0.0:
            y = 0.0
        lo = <Py_ssize_t> floor(y)
        if lo > top:
            lo = top
        fr = y - lo
        total += weights[j] * ((1.0 - fr) * phi_tab[lo] + fr * phi_tab[lo + 1])
    return total


def marginal_gain(const int64_t[::1] left_indptr,
                  const int64_t[::1] left_indices,
                  const double[::1] weights,
                  const int64_t[::1] counts,
                  const double[::1] slopes,
                  Py_ssize_t i):
    cdef Py_ssize_t t, j
    cdef double g = 0.0
    for t in range(left_indptr[i], left_indptr[i + 1]):
        j = left_indices[t]
        g += weights[j] * slopes[counts[j] + 1]
    return g


def all_gains(const int64_t[::1] left_indptr,
              const int64_t[::1] left_indices,
              const double[::1] weights,
              const int64_t[::1] counts,
              const double[::1] slopes):
    cdef Py_ssize_t n = left_indptr.shape[0] - 1
    cdef Py_ssize_t i, t, j
    cdef double g
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(n):
        g = 0.0
        for t in range(left_indptr[i], left_indptr[i + 1]):
            j = left_indices[t]
            g += weights[j] * slopes[counts[j] + 1]
        o[i] = g
    return out


def add_element(const int64_t[::1] left_indptr,
                const int64_t[::1] left_indices,
                int64_t[::1] counts,
                Py_ssize_t i):
    cdef Py_ssize_t t
    for t in range(left_indptr[i], left_indptr[i + 1]):
        counts[left_indices[t]] += 1
