"""Reference Koszul dimension count, kept deliberately naive.

Structurally independent of the production engine: lexicographic subset
order instead of colex, signs recomputed by counting smaller members, pure
Python row reduction on lists.  Shares only the ring's multiplication data,
so any indexing or sign drift in the fast path shows up as a mismatch here.
"""

from __future__ import annotations

import itertools
from math import comb

from .gradedring import GradedAlgebra


def rank_mod(rows: list[list[int]], p: int) -> int:
    """Row-reduction rank of a dense list-of-lists matrix over GF(p)."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    rank = 0
    for col in range(len(rows[0])):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col] % p:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col] % p, -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col] % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _differential(ring: GradedAlgebra, p: int, q: int):
    """d(p, q) on lexicographically ordered subset bases; returns rows, ncols."""
    r = ring.r1_dim
    pp = ring.ctx.p
    subs_src = list(itertools.combinations(range(r), p))
    subs_dst = list(itertools.combinations(range(r), p - 1))
    dst_index = {s: i for i, s in enumerate(subs_dst)}
    dsrc, ddst = ring.dims[q], ring.dims[q + 1]
    ncols = len(subs_src) * dsrc
    mat = [[0] * ncols for _ in range(len(subs_dst) * ddst)]
    for ci, w in enumerate(subs_src):
        for v in w:
            rest = tuple(x for x in w if x != v)
            sign = -1 if sum(1 for x in w if x < v) % 2 else 1
            ri = dst_index[rest]
            block = ring.mult[v][q]
            for bi in range(ddst):
                row = mat[ri * ddst + bi]
                for bj in range(dsrc):
                    val = int(block[bi, bj])
                    if val:
                        row[ci * dsrc + bj] = val * sign % pp
    return mat, ncols


def kappa_naive(ring: GradedAlgebra, p: int, q: int) -> int:
    """dim K_(p,q) recomputed from scratch."""
    r = ring.r1_dim
    pp = ring.ctx.p
    if p < 0 or p > r or q < 0 or q > ring.qmax - 1:
        raise ValueError(f"cell (p={p}, q={q}) out of range")
    if p == 0:
        kernel = ring.dims[q]
    else:
        mat, ncols = _differential(ring, p, q)
        kernel = ncols - rank_mod(mat, pp)
    rank_in = 0
    if q >= 1 and p + 1 <= r:
        mat_in, ncols_in = _differential(ring, p + 1, q - 1)
        if ncols_in:
            rank_in = rank_mod(mat_in, pp)
    value = kernel - rank_in
    if value < 0:
        raise AssertionError(f"negative naive count at (p={p}, q={q})")
    return value
