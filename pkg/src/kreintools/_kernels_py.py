"""Numpy implementation of the region kernels (fallback for ``_kernels``)."""

import numpy as np

GOLDEN_ITERS = 60
GRID = 257
_INVPHI = 0.6180339887498949


def capsule_signed_distance(zr, zi, p, q, r):
    t = np.clip(zr, p, q)
    return np.hypot(zr - t, zi) - r


def _q(x, y, t, c0, c1):
    return (x - t) * (x - t) + y * y - c0 - c1 * t * t


def ballunion_qmin(zr, zi, gamma, c0, c1):
    best = np.minimum(_q(zr, zi, -gamma, c0, c1), _q(zr, zi, gamma, c0, c1))
    lead = 1.0 - c1
    if lead > 0.0:
        ts = np.clip(zr / lead, -gamma, gamma)
        best = np.minimum(best, _q(zr, zi, ts, c0, c1))
    return best


def _h(x, y, t, c0, c1):
    return np.hypot(x - t, y) - np.sqrt(np.maximum(c0 + c1 * t * t, 0.0))


def ballunion_signed_distance(zr, zi, gamma, c0, c1):
    zr = np.asarray(zr, dtype=float)
    zi = np.asarray(zi, dtype=float)
    if gamma <= 0.0:
        return _h(zr, zi, 0.0, c0, c1), np.zeros_like(zr)
    step = 2.0 * gamma / (GRID - 1)
    grid = -gamma + step * np.arange(GRID)
    vals = _h(zr[:, None], zi[:, None], grid[None, :], c0, c1)
    kbest = np.argmin(vals, axis=1)
    best = vals[np.arange(zr.size), kbest]
    a = np.maximum(-gamma + (kbest - 1) * step, -gamma)
    b = np.minimum(-gamma + (kbest + 1) * step, gamma)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = _h(zr, zi, c, c0, c1)
    fd = _h(zr, zi, d, c0, c1)
    for _ in range(GOLDEN_ITERS):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _INVPHI * (b - a)
        new_d = a + _INVPHI * (b - a)
        c, d = np.where(left, new_c, d), np.where(left, c, new_d)
        fc_next = np.where(left, _h(zr, zi, c, c0, c1), fd)
        fd_next = np.where(left, fc, _h(zr, zi, d, c0, c1))
        fc, fd = fc_next, fd_next
    t = 0.5 * (a + b)
    v = _h(zr, zi, t, c0, c1)
    better = v < best
    tstar = np.where(better, t, -gamma + kbest * step)
    return np.where(better, v, best), tstar
