# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled row-elimination core for dense matrices over GF(p).

Same contract as the pure fallback: `echelon` works in place on a
C-contiguous int64 array whose entries start in [0, p) and returns the pivot
columns.  Internally rows accumulate unreduced values of magnitude up to
p^2 per update; a per-row budget forces a reduction pass before anything can
approach 2^63, so the arithmetic is exact for p up to 2^25 and beyond.
"""

from libc.stdint cimport int64_t

import numpy as np


def backend_name():
    return "cython"


cdef inline int64_t _mod(int64_t v, int64_t p) nogil:
    v = v % p
    if v < 0:
        v += p
    return v


def echelon(int64_t[:, ::1] a, long long p, bint full):
    """In-place row reduction over GF(p); returns pivot columns in order."""
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t c, i, j, k, piv_row
    cdef int64_t pp = <int64_t> p
    cdef int64_t f, v, inv
    # Each update subtracts at most (p-1)^2 in magnitude; keeping the count
    # below 2^62 / p^2 bounds every entry strictly inside int64.
    cdef int64_t budget0 = (<int64_t> 1 << 62) // (pp * pp)
    if budget0 < 1:
        budget0 = 1
    budgets = np.full(m, budget0, dtype=np.int64)
    cdef int64_t[::1] bud = budgets
    pivots = []

    for c in range(n):
        if r == m:
            break
        piv_row = -1
        with nogil:
            for i in range(r, m):
                if _mod(a[i, c], pp) != 0:
                    piv_row = i
                    break
        if piv_row < 0:
            continue
        if piv_row != r:
            with nogil:
                for j in range(n):
                    v = a[r, j]
                    a[r, j] = a[piv_row, j]
                    a[piv_row, j] = v
            v = bud[r]
            bud[r] = bud[piv_row]
            bud[piv_row] = v
        with nogil:
            for j in range(c, n):
                a[r, j] = _mod(a[r, j], pp)
        inv = pow(int(a[r, c]), -1, int(pp))
        if inv != 1:
            with nogil:
                for j in range(c, n):
                    a[r, j] = (a[r, j] * inv) % pp
        bud[r] = budget0
        with nogil:
            for i in range(r + 1, m):
                f = _mod(a[i, c], pp)
                if f == 0:
                    continue
                if bud[i] <= 0:
                    for j in range(c, n):
                        a[i, j] = _mod(a[i, j], pp)
                    bud[i] = budget0
                for j in range(c, n):
                    a[i, j] -= f * a[r, j]
                bud[i] -= 1
        pivots.append(c)
        r += 1

    if full:
        for i in range(m):
            bud[i] = budget0
        for k in range(len(pivots) - 1, 0, -1):
            c = pivots[k]
            with nogil:
                # the source row may have been a target of later-pivot steps
                for j in range(c, n):
                    a[k, j] = _mod(a[k, j], pp)
                for i in range(0, k):
                    f = _mod(a[i, c], pp)
                    if f == 0:
                        continue
                    if bud[i] <= 0:
                        for j in range(c, n):
                            a[i, j] = _mod(a[i, j], pp)
                        bud[i] = budget0
                    for j in range(c, n):
                        a[i, j] -= f * a[k, j]
                    bud[i] -= 1
        with nogil:
            for i in range(m):
                for j in range(n):
                    a[i, j] = _mod(a[i, j], pp)

    return pivots
