# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled region kernels; ``_kernels_py`` holds the numpy twin with the same API."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot, INFINITY

cnp.import_array()

cdef int GOLDEN_ITERS = 60
cdef int GRID = 257


cdef inline double _clip(double t, double lo, double hi) nogil:
    if t < lo:
        return lo
    if t > hi:
        return hi
    return t


cdef inline double _q(double x, double y, double t, double c0, double c1) nogil:
    return (x - t) * (x - t) + y * y - c0 - c1 * t * t


cdef inline double _h(double x, double y, double t, double c0, double c1) nogil:
    cdef double rr = c0 + c1 * t * t
    if rr < 0.0:
        rr = 0.0
    return hypot(x - t, y) - sqrt(rr)


def capsule_signed_distance(double[::1] zr, double[::1] zi, double p, double q, double r):
    cdef Py_ssize_t i, n = zr.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double t
    with nogil:
        for i in range(n):
            t = _clip(zr[i], p, q)
            o[i] = hypot(zr[i] - t, zi[i]) - r
    return out


def ballunion_qmin(double[::1] zr, double[::1] zi, double gamma, double c0, double c1):
    cdef Py_ssize_t i, n = zr.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double x, y, best, v, lead = 1.0 - c1, ts
    with nogil:
        for i in range(n):
            x = zr[i]
            y = zi[i]
            best = _q(x, y, -gamma, c0, c1)
            v = _q(x, y, gamma, c0, c1)
            if v < best:
                best = v
            if lead > 0.0:
                ts = _clip(x / lead, -gamma, gamma)
                v = _q(x, y, ts, c0, c1)
                if v < best:
                    best = v
            o[i] = best
    return out


def ballunion_signed_distance(double[::1] zr, double[::1] zi, double gamma, double c0, double c1):
    cdef Py_ssize_t i, k, kbest, n = zr.shape[0]
    out = np.empty(n, dtype=np.float64)
    tstar = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double[::1] ts = tstar
    cdef double x, y, best, v, step, a, b, c, d, fc, fd, t
    cdef double invphi = 0.6180339887498949
    cdef int it
    with nogil:
        for i in range(n):
            x = zr[i]
            y = zi[i]
            if gamma <= 0.0:
                o[i] = _h(x, y, 0.0, c0, c1)
                ts[i] = 0.0
                continue
            step = 2.0 * gamma / (GRID - 1)
            best = INFINITY
            kbest = 0
            for k in range(GRID):
                t = -gamma + k * step
                v = _h(x, y, t, c0, c1)
                if v < best:
                    best = v
                    kbest = k
            a = -gamma + (kbest - 1) * step
            b = -gamma + (kbest + 1) * step
            if a < -gamma:
                a = -gamma
            if b > gamma:
                b = gamma
            c = b - invphi * (b - a)
            d = a + invphi * (b - a)
            fc = _h(x, y, c, c0, c1)
            fd = _h(x, y, d, c0, c1)
            for it in range(GOLDEN_ITERS):
                if fc < fd:
                    b = d
                    d = c
                    fd = fc
                    c = b - invphi * (b - a)
                    fc = _h(x, y, c, c0, c1)
                else:
                    a = c
                    c = d
                    fc = fd
                    d = a + invphi * (b - a)
                    fd = _h(x, y, d, c0, c1)
            t = 0.5 * (a + b)
            v = _h(x, y, t, c0, c1)
            if v < best:
                best = v
                ts[i] = t
            else:
                ts[i] = -gamma + kbest * step
            o[i] = best
    return out, tstar
