# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Riemann-Siegel kernel.

Mirrors ``ladderlab._rs_numpy.hardy_z_many`` operation for operation.
"""

import numpy as np

from libc.math cimport cos, floor, log, sqrt

cdef double PI = 3.141592653589793
cdef double TWO_PI = 6.283185307179586


cdef inline double _theta(double t) nogil:
    return (0.5 * t * log(t / TWO_PI) - 0.5 * t - PI / 8.0
            + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t * t * t))


def hardy_z_many(const double[::1] t, const double[:, ::1] coeffs,
                 const long[::1] lengths, int order):
    cdef Py_ssize_t m = t.shape[0]
    cdef Py_ssize_t i, n, j, k, big_n, nmax = 1, width = 0
    cdef double tt, a, p, z, th, s, bj, rem, ainv
    cdef double pw[16]

    if order > 15:
        raise ValueError("correction order above 15")
    for k in range(order + 1):
        if lengths[k] > width:
            width = lengths[k]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    for i in range(m):
        big_n = <Py_ssize_t>floor(sqrt(t[i] / TWO_PI))
        if big_n > nmax:
            nmax = big_n

    log_n_arr = np.log(np.arange(1, nmax + 1, dtype=np.float64))
    rsqrt_arr = 1.0 / np.sqrt(np.arange(1, nmax + 1, dtype=np.float64))
    cdef double[::1] log_n = log_n_arr
    cdef double[::1] rsqrt = rsqrt_arr

    with nogil:
        for i in range(m):
            tt = t[i]
            a = sqrt(tt / TWO_PI)
            big_n = <Py_ssize_t>floor(a)
            p = a - big_n
            th = _theta(tt)
            s = 0.0
            for n in range(big_n):
                s = s + cos(th - tt * log_n[n]) * rsqrt[n]
            z = p - 0.5
            ainv = 1.0 / a
            pw[0] = 1.0
            for k in range(1, order + 1):
                pw[k] = pw[k - 1] * ainv
            # sum_k C_k(z) a^-k as one polynomial in z; the inner sums over k
            # are independent, leaving a single dependent Horner chain.
            rem = 0.0
            for j in range(width - 1, -1, -1):
                bj = 0.0
                for k in range(order + 1):
                    bj = bj + coeffs[k, j] * pw[k]
                rem = rem * z + bj
            if big_n % 2 == 1:
                res[i] = 2.0 * s + rem / sqrt(a)
            else:
                res[i] = 2.0 * s - rem / sqrt(a)
    return out
