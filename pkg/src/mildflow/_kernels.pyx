# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the kernels in ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt

cnp.import_array()


def volterra_lag_solve(double[::1] g, double[::1] left0, double[::1] lag, double denom, double z0):
    cdef Py_ssize_t M = g.shape[0] - 1
    cdef Py_ssize_t i, m
    cdef double s
    out = np.empty(M + 1)
    cdef double[::1] z = out
    z[0] = z0
    for i in range(1, M + 1):
        s = g[i] + left0[i] * z0
        for m in range(1, i):
            s += lag[i - m] * z[m]
        z[i] = s / denom
    return out


def pairwise_holder_sup(const double[:, ::1] V, const double[::1] t, double gamma,
                        Py_ssize_t split, bint use_max, double t_min):
    cdef Py_ssize_t M = V.shape[0], d = V.shape[1]
    cdef Py_ssize_t i, j, c, bi = -1, bj = -1
    cdef double best = 0.0, na, nb, x, q
    cdef double tol = 1e-14 * (fabs(t_min) if fabs(t_min) > 1.0 else 1.0)
    for i in range(M - 1):
        if t[i] < t_min - tol:
            continue
        for j in range(i + 1, M):
            na = 0.0
            nb = 0.0
            if use_max:
                for c in range(split):
                    x = fabs(V[j, c] - V[i, c])
                    if x > na:
                        na = x
                for c in range(split, d):
                    x = fabs(V[j, c] - V[i, c])
                    if x > nb:
                        nb = x
            else:
                for c in range(split):
                    x = V[j, c] - V[i, c]
                    na += x * x
                for c in range(split, d):
                    x = V[j, c] - V[i, c]
                    nb += x * x
                na = sqrt(na)
                nb = sqrt(nb)
            q = (na + nb) / pow(t[j] - t[i], gamma)
            if q > best:
                best = q
                bi = i
                bj = j
    return best, bi, bj
