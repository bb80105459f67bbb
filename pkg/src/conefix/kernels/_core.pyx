# cython: language_level=3
"""Compiled pair-evaluation kernels.

Mirrors conefix.kernels._fallback exactly; see that module for the contract,
the pair shorthand, and the family codes.  All arithmetic is elementwise or
min/max reductions, so both backends produce bit-identical results.
"""

import numpy as np

cimport cython
from libc.math cimport INFINITY


@cython.boundscheck(False)
@cython.wraparound(False)
def condition_slacks(const double[:, :, ::1] table, const long[::1] s_img,
                     const long[::1] t_img,
                     int family, double p1, double p2, double p3):
    """Orthant-order slack of the condition for every ordered pair."""
    cdef Py_ssize_t n = s_img.shape[0]
    cdef Py_ssize_t m = table.shape[2]
    cdef Py_ssize_t x, y, i
    cdef long sx, sy, tx, ty
    cdef double lhs, big_d, u, v, w, z
    cdef double rhs, slack, s1, s2, s3
    if family < 0 or family > 8:
        raise ValueError(f"unknown family code {family}")
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] res = out
    for x in range(n):
        sx = s_img[x]
        tx = t_img[x]
        for y in range(n):
            sy = s_img[y]
            ty = t_img[y]
            if family == 5 or family == 6:
                s1 = INFINITY
                s2 = INFINITY
                s3 = INFINITY
                for i in range(m):
                    lhs = table[sx, sy, i]
                    big_d = table[tx, ty, i]
                    u = table[sx, tx, i]
                    v = table[sy, ty, i]
                    w = table[sx, ty, i]
                    z = table[sy, tx, i]
                    if family == 5:
                        slack = p1 * big_d - lhs
                        if slack < s1:
                            s1 = slack
                        slack = p2 * (u + v) - lhs
                        if slack < s2:
                            s2 = slack
                        slack = p3 * (w + z) - lhs
                        if slack < s3:
                            s3 = slack
                    else:
                        slack = p1 * big_d - lhs
                        if slack < s1:
                            s1 = slack
                        slack = p1 * (u + v) / 2.0 - lhs
                        if slack < s2:
                            s2 = slack
                        slack = p1 * (w + z) / 2.0 - lhs
                        if slack < s3:
                            s3 = slack
                if s2 > s1:
                    s1 = s2
                if s3 > s1:
                    s1 = s3
                res[x, y] = s1
            else:
                s1 = INFINITY
                for i in range(m):
                    lhs = table[sx, sy, i]
                    big_d = table[tx, ty, i]
                    u = table[sx, tx, i]
                    v = table[sy, ty, i]
                    w = table[sx, ty, i]
                    z = table[sy, tx, i]
                    if family == 0:
                        rhs = p1 * big_d
                    elif family == 1:
                        rhs = p1 * (u + v)
                    elif family == 2:
                        rhs = p1 * (w + z)
                    elif family == 3:
                        rhs = p1 * big_d + p2 * (u + v) + p3 * (w + z)
                    elif family == 4:
                        rhs = p1 * big_d + p2 * (u + v) + p3 * (w + v)
                    elif family == 7:
                        rhs = p1 * big_d + p2 * u
                    else:
                        rhs = p1 * big_d + p2 * z
                    slack = rhs - lhs
                    if slack < s1:
                        s1 = slack
                res[x, y] = s1
    return out


cdef inline double _coord_required(double lhs, double pattern) nogil:
    if pattern > 0.0:
        return lhs / pattern
    if lhs <= 0.0:
        return 0.0
    return INFINITY


@cython.boundscheck(False)
@cython.wraparound(False)
def minimal_ratios(const double[:, :, ::1] table, const long[::1] s_img,
                   const long[::1] t_img, int family):
    """Minimal per-pair parameter for the single-parameter families."""
    cdef Py_ssize_t n = s_img.shape[0]
    cdef Py_ssize_t m = table.shape[2]
    cdef Py_ssize_t x, y, i
    cdef long sx, sy, tx, ty
    cdef double lhs, pat, r, r1, r2, r3
    if family != 0 and family != 1 and family != 2 and family != 6:
        raise ValueError(f"family code {family} has no single-parameter fit")
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] res = out
    for x in range(n):
        sx = s_img[x]
        tx = t_img[x]
        for y in range(n):
            sy = s_img[y]
            ty = t_img[y]
            r1 = -INFINITY
            r2 = -INFINITY
            r3 = -INFINITY
            for i in range(m):
                lhs = table[sx, sy, i]
                if family == 0:
                    pat = table[tx, ty, i]
                    r = _coord_required(lhs, pat)
                    if r > r1:
                        r1 = r
                elif family == 1:
                    pat = table[sx, tx, i] + table[sy, ty, i]
                    r = _coord_required(lhs, pat)
                    if r > r1:
                        r1 = r
                elif family == 2:
                    pat = table[sx, ty, i] + table[sy, tx, i]
                    r = _coord_required(lhs, pat)
                    if r > r1:
                        r1 = r
                else:
                    r = _coord_required(lhs, table[tx, ty, i])
                    if r > r1:
                        r1 = r
                    pat = (table[sx, tx, i] + table[sy, ty, i]) / 2.0
                    r = _coord_required(lhs, pat)
                    if r > r2:
                        r2 = r
                    pat = (table[sx, ty, i] + table[sy, tx, i]) / 2.0
                    r = _coord_required(lhs, pat)
                    if r > r3:
                        r3 = r
            if family == 6:
                if r2 < r1:
                    r1 = r2
                if r3 < r1:
                    r1 = r3
            res[x, y] = r1
    return out
