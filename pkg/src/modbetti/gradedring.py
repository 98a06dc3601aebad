"""Graded coordinate rings presented by ideals or by parametrizations.

A ring is stored as its degree-slice dimensions together with explicit
multiplication-by-coordinate matrices between consecutive slices.  Bases are
the deterministic ones induced by RREF against the canonical monomial orders,
so two constructions of the same ring agree entry for entry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gfp import FieldContext, MatrixGF, matmul_mod
from .multilinear import enumerate_monomials, grevlex_key, monomial_index

PARAM_VARS = 4  # parametrizations are bihomogeneous in (s, u) x (a, b)


class RingConstructionError(ValueError):
    """Raised when a presentation cannot yield a valid graded ring."""


@dataclass(frozen=True)
class IdealPresentation:
    """A homogeneous ideal: generator terms are (coeff, exponent-tuple) pairs."""

    num_vars: int
    generators: tuple  # of (degree, ((coeff, exps), ...))


@dataclass(frozen=True)
class BigradedParametrization:
    """Coordinate forms on (s,u) x (a,b), all of one bidegree (the surface
    case uses both factors, curves leave the second degree at zero)."""

    bidegree: tuple[int, int]
    forms: tuple  # of ((coeff, (es, eu, ea, eb)), ...)


@dataclass(frozen=True)
class HilbertReport:
    family: str
    genus: int | None
    expected: tuple[int, ...]
    actual: tuple[int, ...]
    ok: bool


class GradedAlgebra:
    """Finitely generated graded algebra truncated at degree qmax.

    dims[q] is the dimension of the degree-q slice; mult[v][q] is the matrix
    of multiplication by the v-th degree-one basis element from slice q to
    slice q+1, with respect to the canonical slice bases.
    """

    __slots__ = ("ctx", "dims", "mult", "meta", "coord_weights", "slice_weights")

    def __init__(
        self,
        ctx: FieldContext,
        dims,
        mult,
        meta=None,
        coord_weights=None,
        slice_weights=None,
    ):
        self.ctx = ctx
        self.dims = tuple(int(d) for d in dims)
        self.mult = mult
        self.meta = dict(meta or {})
        if (coord_weights is None) != (slice_weights is None):
            raise RingConstructionError("coordinate and slice weights come together")
        if coord_weights is None:
            self.coord_weights = None
            self.slice_weights = None
        else:
            self.coord_weights = np.asarray(coord_weights, dtype=np.int64)
            self.slice_weights = tuple(
                np.asarray(w, dtype=np.int64) for w in slice_weights
            )
        self._validate()

    @property
    def r1_dim(self) -> int:
        return self.dims[1]

    @property
    def qmax(self) -> int:
        return len(self.dims) - 1

    def mult_map(self, v: int, q: int) -> np.ndarray:
        return self.mult[v][q]

    def _validate(self):
        if self.dims[0] != 1:
            raise RingConstructionError(f"degree-0 slice has dimension {self.dims[0]}")
        if self.qmax < 1:
            raise RingConstructionError("ring must be constructed through degree 1")
        r = self.r1_dim
        if len(self.mult) != r:
            raise RingConstructionError("one multiplication family per coordinate required")
        for v in range(r):
            for q in range(self.qmax):
                got = self.mult[v][q].shape
                want = (self.dims[q + 1], self.dims[q])
                if got != want:
                    raise RingConstructionError(
                        f"mult[{v}][{q}] has shape {got}, expected {want}"
                    )
        p = self.ctx.p
        # commutativity of all coordinate pairs, on every constructed degree
        for i in range(r):
            for j in range(i + 1, r):
                for q in range(self.qmax - 1):
                    ij = matmul_mod(self.mult[i][q + 1], self.mult[j][q], p)
                    ji = matmul_mod(self.mult[j][q + 1], self.mult[i][q], p)
                    if not np.array_equal(ij, ji):
                        raise RingConstructionError(
                            f"multiplication not commutative: coordinates {i},{j} at degree {q}"
                        )
        # generation in degree one: the images of slice q must span slice q+1
        for q in range(self.qmax):
            if self.dims[q + 1] == 0:
                continue
            stacked = np.hstack([self.mult[v][q] for v in range(r)])
            if MatrixGF(stacked, self.ctx, reduce=False).rank() != self.dims[q + 1]:
                raise RingConstructionError(
                    f"ring not generated in degree one at degree {q + 1}"
                )
        if self.slice_weights is not None:
            if len(self.coord_weights) != r or len(self.slice_weights) != self.qmax + 1:
                raise RingConstructionError("weight data has the wrong shape")
            for q in range(self.qmax + 1):
                if len(self.slice_weights[q]) != self.dims[q]:
                    raise RingConstructionError("weight data has the wrong shape")
            # every coordinate must shift slice weights by exactly its weight
            for v in range(r):
                for q in range(self.qmax):
                    rows, cols = np.nonzero(self.mult[v][q])
                    lhs = self.slice_weights[q + 1][rows]
                    rhs = self.slice_weights[q][cols] + self.coord_weights[v]
                    if not np.array_equal(lhs, rhs):
                        raise RingConstructionError(
                            f"coordinate {v} is not weight homogeneous at degree {q}"
                        )


def _clean_ideal(pres: IdealPresentation, p: int):
    """Normalize generators mod p, enforcing homogeneity and minimality."""
    nv = pres.num_vars
    if nv < 1:
        raise RingConstructionError("ideal presentation needs at least one variable")
    cleaned = []
    for gen in pres.generators:
        degree, terms = gen
        seen = {}
        for coeff, exps in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nv or any(e < 0 for e in exps):
                raise RingConstructionError(f"bad exponent vector {exps}")
            if sum(exps) != degree:
                raise RingConstructionError(
                    f"generator not homogeneous: term {exps} in degree-{degree} generator"
                )
            seen[exps] = (seen.get(exps, 0) + int(coeff)) % p
        live = {e: c for e, c in seen.items() if c}
        if not live:
            continue
        if degree < 2:
            raise RingConstructionError(
                "ambient not minimal: ideal contains a linear generator"
            )
        terms_out = tuple(
            (c, exps) for exps, c in sorted(live.items(), key=lambda t: grevlex_key(t[0]))
        )
        cleaned.append((degree, terms_out))
    return cleaned


def ring_from_ideal(
    pres: IdealPresentation,
    ctx: FieldContext,
    qmax: int = 4,
    meta: dict | None = None,
    coord_weights=None,
) -> GradedAlgebra:
    """Quotient ring of a polynomial ring by a homogeneous ideal, truncated.

    Degree slices are spanned by standard monomials: the non-pivot columns of
    the RREF of the degree-q ideal span against descending grevlex.
    """
    if qmax < 1:
        raise RingConstructionError("qmax must be at least 1")
    p = ctx.p
    nv = pres.num_vars
    gens = _clean_ideal(pres, p)

    monos = {q: enumerate_monomials(nv, q) for q in range(qmax + 1)}
    index = {q: monomial_index(monos[q]) for q in range(qmax + 1)}

    std_cols: dict[int, np.ndarray] = {}
    std_index: dict[int, dict[int, int]] = {}
    nf_rows: dict[int, dict[int, np.ndarray]] = {}
    dims = []
    for q in range(qmax + 1):
        ncols = len(monos[q])
        rows = []
        for degree, terms in gens:
            if degree > q:
                continue
            for mono in monos[q - degree]:
                row = np.zeros(ncols, dtype=np.int64)
                for coeff, exps in terms:
                    shifted = tuple(m + e for m, e in zip(mono, exps))
                    row[index[q][shifted]] = coeff
                rows.append(row)
        if rows:
            rref, piv = MatrixGF(np.array(rows), ctx, reduce=False).rref()
            pivset = set(piv)
            keep = np.array([j for j in range(ncols) if j not in pivset], dtype=np.int64)
            nf_rows[q] = {
                col: rref.array[i, keep] for i, col in enumerate(piv)
            }
        else:
            keep = np.arange(ncols, dtype=np.int64)
            nf_rows[q] = {}
        std_cols[q] = keep
        std_index[q] = {int(col): i for i, col in enumerate(keep)}
        dims.append(len(keep))

    mult = []
    for v in range(nv):
        maps_v = []
        for q in range(qmax):
            mat = np.zeros((dims[q + 1], dims[q]), dtype=np.int64)
            for bidx, col in enumerate(std_cols[q]):
                exps = list(monos[q][int(col)])
                exps[v] += 1
                target = index[q + 1][tuple(exps)]
                if target in std_index[q + 1]:
                    mat[std_index[q + 1][target], bidx] = 1
                else:
                    # normal form of a pivot monomial: minus its RREF row,
                    # which is already supported on standard monomials only
                    mat[:, bidx] = (p - nf_rows[q + 1][target]) % p
            maps_v.append(mat)
        mult.append(maps_v)

    slice_weights = None
    if coord_weights is not None:
        cw = np.asarray(coord_weights, dtype=np.int64)
        if len(cw) != nv:
            raise RingConstructionError("one weight per variable required")
        slice_weights = [
            np.array(
                [sum(int(e) * int(w) for e, w in zip(monos[q][int(c)], cw)) for c in std_cols[q]],
                dtype=np.int64,
            )
            for q in range(qmax + 1)
        ]

    return GradedAlgebra(
        ctx, dims, mult, meta, coord_weights=coord_weights, slice_weights=slice_weights
    )


def _conv2(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Polynomial product of two dense bihomogeneous coefficient grids."""
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=np.int64)
    for i, j in zip(*np.nonzero(b)):
        out[i : i + a.shape[0], j : j + a.shape[1]] += b[i, j] * a
        out %= p
    return out


def _form_grid(terms, d: int, e: int, p: int) -> np.ndarray:
    """Coefficient grid of one bidegree-(d,e) form; grid[i,j] multiplies
    s^(d-i) u^i a^(e-j) b^j."""
    grid = np.zeros((d + 1, e + 1), dtype=np.int64)
    for coeff, exps in terms:
        es, eu, ea, eb = (int(x) for x in exps)
        if any(x < 0 for x in (es, eu, ea, eb)):
            raise RingConstructionError(f"bad exponent vector {exps}")
        if es + eu != d or ea + eb != e:
            raise RingConstructionError(
                f"generator not homogeneous: term {exps} off bidegree ({d},{e})"
            )
        grid[eu, eb] = (grid[eu, eb] + int(coeff)) % p
    return grid


def ring_from_parametrization(
    par: BigradedParametrization,
    ctx: FieldContext,
    qmax: int = 4,
    meta: dict | None = None,
    torus_weights: tuple[int, int, int, int] | None = None,
) -> GradedAlgebra:
    """Coordinate ring of the image of a bigraded monomial-space morphism.

    The degree-q slice is the span of all q-fold products of the coordinate
    forms inside the full bidegree-(qd, qe) space; its canonical basis is the
    RREF of the monomial-product matrix.
    """
    if qmax < 1:
        raise RingConstructionError("qmax must be at least 1")
    p = ctx.p
    d, e = (int(x) for x in par.bidegree)
    if d < 1 or e < 0:
        raise RingConstructionError(f"bad bidegree ({d},{e})")
    m = len(par.forms)
    if m < 2:
        raise RingConstructionError("parametrization needs at least two coordinates")
    grids = [_form_grid(terms, d, e, p) for terms in par.forms]
    if any(not g.any() for g in grids):
        raise RingConstructionError("parametrization degenerate: zero coordinate form")

    # q-fold products of coordinate forms, indexed by ambient monomials
    prod: dict[tuple[int, ...], np.ndarray] = {(0,) * m: np.ones((1, 1), dtype=np.int64)}
    monos = {q: enumerate_monomials(m, q) for q in range(qmax + 1)}
    for q in range(1, qmax + 1):
        for exps in monos[q]:
            v = next(i for i, x in enumerate(exps) if x)
            lower = list(exps)
            lower[v] -= 1
            prod[exps] = _conv2(prod[tuple(lower)], grids[v], p)

    dims = [1]
    basis_rows: dict[int, np.ndarray] = {}
    pivot_cols: dict[int, np.ndarray] = {}
    for q in range(1, qmax + 1):
        rows = np.array([prod[exps].ravel() for exps in monos[q]], dtype=np.int64)
        rref, piv = MatrixGF(rows, ctx, reduce=False).rref()
        rank = len(piv)
        if q == 1 and rank != m:
            raise RingConstructionError(
                "parametrization degenerate: coordinate forms are dependent"
            )
        basis_rows[q] = rref.array[:rank]
        pivot_cols[q] = np.array(piv, dtype=np.int64)
        dims.append(rank)
    basis_rows[0] = np.ones((1, 1), dtype=np.int64)
    pivot_cols[0] = np.zeros(1, dtype=np.int64)

    mult = []
    for v in range(m):
        maps_v = []
        for q in range(qmax):
            rows_q = basis_rows[q]
            mat = np.zeros((dims[q + 1], dims[q]), dtype=np.int64)
            hi, wi = q * d + 1, q * e + 1
            for bidx in range(dims[q]):
                w = _conv2(rows_q[bidx].reshape(hi, wi), grids[v], p).ravel()
                coords = w[pivot_cols[q + 1]]
                # RREF rows carry an identity at the pivot columns, so the
                # pivot entries of any row-space vector are its coordinates
                if not np.array_equal(
                    coords @ basis_rows[q + 1] % p, w
                ):
                    raise AssertionError("product left the constructed slice")
                mat[:, bidx] = coords
            maps_v.append(mat)
        mult.append(maps_v)

    coord_weights = None
    slice_weights = None
    if torus_weights is not None:
        ws, wu, wa, wb = (int(x) for x in torus_weights)

        def grid_weights(deg: int) -> np.ndarray:
            hi, wi = deg * d + 1, deg * e + 1
            out = np.empty((hi, wi), dtype=np.int64)
            for i in range(hi):
                for j in range(wi):
                    out[i, j] = (deg * d - i) * ws + i * wu + (deg * e - j) * wa + j * wb
            return out.ravel()

        # each coordinate form must be a torus eigenvector; that weight is
        # what the Koszul layer blocks on
        coord_weights = []
        w1 = grid_weights(1)
        for v, g in enumerate(grids):
            support = np.nonzero(g.ravel())[0]
            wts = w1[support]
            if not np.array_equal(wts, np.full(len(wts), wts[0])):
                raise RingConstructionError(
                    f"coordinate form {v} is not homogeneous for the given torus weights"
                )
            coord_weights.append(int(wts[0]))
        # basis rows of a weight-graded span are weight homogeneous, labeled
        # by their pivot column; cross-check the whole support
        slice_weights = []
        for q in range(qmax + 1):
            gw = grid_weights(q)
            wts = gw[pivot_cols[q]]
            for i in range(dims[q]):
                support = np.nonzero(basis_rows[q][i])[0]
                if not np.array_equal(gw[support], np.full(len(support), wts[i])):
                    raise RingConstructionError(
                        f"slice basis row {i} of degree {q} is not weight homogeneous"
                    )
            slice_weights.append(wts)

    return GradedAlgebra(
        ctx, dims, mult, meta, coord_weights=coord_weights, slice_weights=slice_weights
    )


def expected_hilbert(kind: str, genus: int | None, qmax: int) -> tuple[int, ...]:
    """Closed-form degree-slice dimensions for the supported model kinds."""
    if kind == "rnc":
        n = genus
        if n is None or n < 1:
            raise ValueError("rational normal curve needs its degree")
        return tuple(n * q + 1 for q in range(qmax + 1))
    if genus is None or genus < 2:
        raise ValueError(f"kind {kind!r} needs a genus of at least 2")
    g = genus
    if kind == "curve":
        return tuple(
            1 if q == 0 else g if q == 1 else (2 * q - 1) * (g - 1)
            for q in range(qmax + 1)
        )
    if kind in ("k3", "tandev"):
        # the tangent developable is a flat degeneration of the smooth
        # genus-g K3 sections, so the two share one Hilbert function
        return tuple(1 if q == 0 else q * q * (g - 1) + 2 for q in range(qmax + 1))
    raise ValueError(f"unknown model kind {kind!r}")


def hilbert_check(ring: GradedAlgebra, kind: str, genus: int | None = None) -> HilbertReport:
    """Compare constructed slice dimensions against the closed form."""
    if genus is None:
        genus = ring.meta.get("genus")
    expected = expected_hilbert(kind, genus, ring.qmax)
    actual = ring.dims
    return HilbertReport(
        family=kind,
        genus=genus,
        expected=expected,
        actual=actual,
        ok=expected == actual,
    )
