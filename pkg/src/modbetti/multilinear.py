"""Monomial, exterior-power and symmetric-power combinatorics.

All orderings are fixed once: monomials of a given degree are listed in
descending graded-reverse-lexicographic order, wedge basis subsets in
colexicographic order.  Every matrix and table the engine produces inherits
its determinism from these two conventions, so they must never change.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np
import scipy.sparse as sp


class SymConventionError(RuntimeError):
    """Raised when the symmetric-power contraction identity fails."""


def num_monomials(nvars: int, degree: int) -> int:
    """Number of degree-`degree` monomials in `nvars` variables."""
    return comb(nvars + degree - 1, degree)


def grevlex_key(exps):
    """Sort key listing exponent vectors in descending grevlex order."""
    return tuple(reversed(exps))


def enumerate_monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of the given total degree, descending grevlex."""
    if nvars < 1 or degree < 0:
        raise ValueError(f"bad monomial range: nvars={nvars}, degree={degree}")
    if degree == 0:
        return [(0,) * nvars]
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(key=grevlex_key)
    return out


def monomial_index(monos) -> dict[tuple[int, ...], int]:
    """Map each exponent vector to its position in the canonical list."""
    return {e: i for i, e in enumerate(monos)}


def wedge_count(r: int, p: int) -> int:
    """Dimension of the p-th exterior power of an r-dimensional space."""
    if p < 0 or p > r:
        raise ValueError(f"wedge degree {p} out of range for ambient dimension {r}")
    return comb(r, p)


def enumerate_subsets(r: int, p: int) -> list[tuple[int, ...]]:
    """All p-subsets of {0..r-1} as increasing tuples, in colex order."""
    wedge_count(r, p)
    subs = list(itertools.combinations(range(r), p))
    subs.sort(key=lambda s: s[::-1])
    return subs


def subset_rank(members) -> int:
    """Colex position of an increasing index tuple among same-size subsets."""
    return sum(comb(m, i + 1) for i, m in enumerate(members))


def subset_unrank(r: int, p: int, idx: int) -> tuple[int, ...]:
    """Inverse of subset_rank among p-subsets of {0..r-1}."""
    if not 0 <= idx < wedge_count(r, p):
        raise ValueError(f"subset index {idx} out of range for C({r},{p})")
    out = []
    top = r
    rem = idx
    for t in range(p, 0, -1):
        # largest m < top with C(m, t) <= rem
        m = t - 1
        while m + 1 < top and comb(m + 1, t) <= rem:
            m += 1
        out.append(m)
        rem -= comb(m, t)
        top = m
    out.reverse()
    return tuple(out)


def wedge_removal_sign(members, j: int):
    """Drop the j-th member of a wedge index tuple; sign is (-1)^j."""
    if not 0 <= j < len(members):
        raise ValueError(f"removal position {j} out of range")
    reduced = members[:j] + members[j + 1 :]
    return reduced, (-1 if j % 2 else 1)


def sym_dim(dim: int, power: int) -> int:
    """Dimension of Sym^power of a dim-dimensional space."""
    if power < 0 or dim < 0:
        raise ValueError("negative symmetric power or dimension")
    if power == 0:
        return 1
    if dim == 0:
        return 0
    return comb(dim + power - 1, power)


def _sym_comultiplication(f_dim: int, power: int) -> sp.csr_matrix:
    """Sym^i F -> Sym^(i-1) F (x) F, sending x^a to sum_v a_v x^(a-e_v) (x) x_v."""
    monos_hi = enumerate_monomials(f_dim, power)
    monos_lo = enumerate_monomials(f_dim, power - 1)
    idx_lo = monomial_index(monos_lo)
    rows, cols, vals = [], [], []
    for cidx, e in enumerate(monos_hi):
        for v, a in enumerate(e):
            if a:
                e2 = list(e)
                e2[v] -= 1
                rows.append(idx_lo[tuple(e2)] * f_dim + v)
                cols.append(cidx)
                vals.append(a)
    shape = (len(monos_lo) * f_dim, len(monos_hi))
    return sp.csr_matrix((vals, (rows, cols)), shape=shape, dtype=np.int64)


def _sym_multiplication(f_dim: int, power: int) -> sp.csr_matrix:
    """Sym^(i-1) F (x) F -> Sym^i F, ordinary polynomial multiplication."""
    monos_hi = enumerate_monomials(f_dim, power)
    monos_lo = enumerate_monomials(f_dim, power - 1)
    idx_hi = monomial_index(monos_hi)
    rows, cols, vals = [], [], []
    for midx, e in enumerate(monos_lo):
        for v in range(f_dim):
            e2 = list(e)
            e2[v] += 1
            rows.append(idx_hi[tuple(e2)])
            cols.append(midx * f_dim + v)
            vals.append(1)
    shape = (len(monos_hi), len(monos_lo) * f_dim)
    return sp.csr_matrix((vals, (rows, cols)), shape=shape, dtype=np.int64)


def sym_comultiply_then_multiply(f_dim: int, power: int) -> int:
    """Verify that multiplication after comultiplication scales Sym^power by power.

    The scalar returned is the verified eigenvalue, i.e. `power` itself.  Any
    deviation means the comultiplication convention drifted and is fatal.
    """
    if f_dim < 1 or power < 1:
        raise ValueError(f"bad symmetric contraction range: dim={f_dim}, power={power}")
    composite = _sym_multiplication(f_dim, power) @ _sym_comultiplication(f_dim, power)
    n = composite.shape[0]
    delta = composite - power * sp.identity(n, dtype=np.int64, format="csr")
    delta.eliminate_zeros()
    if delta.nnz:
        raise SymConventionError(
            f"Sym composite identity violated at dim={f_dim}, power={power}"
        )
    return power


def weyman_dimension_identity(d1: int, d2: int, power: int) -> bool:
    """Alternating dimension sums for a short exact sequence 0->F1->F2->F3->0.

    Checks, for the wedge resolution of F3 and the Sym resolution of F1,

        wedge^i F3 = sum_j (-1)^j  C(d2, i-j) * sym_dim(d1, j)
        Sym^i  F1 = sum_j (-1)^j  sym_dim(d2, i-j) * C(d3, j)

    where d3 = d2 - d1.  Both must hold for every i.
    """
    if d1 < 0 or d2 < d1 or power < 0:
        raise ValueError(f"bad sequence dimensions: d1={d1}, d2={d2}")
    d3 = d2 - d1
    wedge_side = sum(
        (-1) ** j * comb(d2, power - j) * sym_dim(d1, j) for j in range(power + 1)
    )
    sym_side = sum(
        (-1) ** j * sym_dim(d2, power - j) * comb(d3, j) for j in range(power + 1)
    )
    return wedge_side == comb(d3, power) and sym_side == sym_dim(d1, power)
