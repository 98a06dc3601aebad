"""Pure numpy elimination kernel, the fallback when the compiled core is absent.

Shares the calling contract of the compiled module: `echelon` works in place
on a C-contiguous int64 array with entries in [0, p) and returns the pivot
column list.  With full=False only the pivot list is meaningful and the array
is left as scratch; with full=True the array holds the reduced row echelon
form, which is canonical for the row space.
"""

from __future__ import annotations

import numpy as np


def backend_name() -> str:
    return "python"


def echelon(a: np.ndarray, p: int, full: bool) -> list[int]:
    """In-place row reduction over GF(p); returns pivot columns in order."""
    m, n = a.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i0 = r + int(nz[0])
        if i0 != r:
            a[[r, i0]] = a[[i0, r]]
        piv = int(a[r, c])
        if piv != 1:
            a[r, c:] = a[r, c:] * pow(piv, -1, p) % p
        below = r + 1 + np.nonzero(a[r + 1 :, c])[0]
        if below.size:
            f = a[below, c][:, None]
            # f and the pivot row are both < p, so products stay far from 2**63
            a[below, c:] = (a[below, c:] - f * a[r, c:]) % p
        pivots.append(c)
        r += 1
    if full and pivots:
        for j in range(len(pivots) - 1, 0, -1):
            c = pivots[j]
            above = np.nonzero(a[:j, c])[0]
            if above.size:
                f = a[above, c][:, None]
                a[above, c:] = (a[above, c:] - f * a[j, c:]) % p
    return pivots
