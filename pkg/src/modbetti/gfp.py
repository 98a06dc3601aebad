"""Exact dense linear algebra over a prime field GF(p).

Matrices are int64 numpy arrays with entries kept in [0, p).  Row reduction
runs in a compiled kernel when the extension built, otherwise in a numpy
fallback with the same contract; both produce the reduced row echelon form,
which is canonical for the row space, so results are backend independent.
Matrix products go through float64 BLAS in chunks small enough that every
intermediate is exact, which is what caps the supported modulus at 2^25.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

DEFAULT_PRIME = 31991
MAX_PRIME = 1 << 25
_FLOAT64_EXACT = 1 << 53

_requested = os.environ.get("MODBETTI_BACKEND", "").strip().lower()
if _requested in ("python", "py", "pure"):
    from . import _kernels_py as _impl
elif _requested in ("cython", "c", "compiled"):
    from . import _kernels as _impl
elif _requested == "":
    try:
        from . import _kernels as _impl
    except ImportError:
        from . import _kernels_py as _impl
else:
    raise ImportError(f"unknown MODBETTI_BACKEND value: {_requested!r}")

KERNEL_BACKEND = _impl.backend_name()


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldContext:
    """A prime modulus plus scalar arithmetic in GF(p)."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not isinstance(self.p, int):
            raise TypeError(f"modulus must be an int, got {type(self.p).__name__}")
        if self.p < 2 or self.p > MAX_PRIME:
            raise ValueError(f"modulus {self.p} outside supported range [2, 2^25]")
        if not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def reduce(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(p)")
        return pow(a, -1, self.p)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) mod p for reduced int64 matrices via chunked float64 GEMM.

    Chunk length along the contraction axis is capped so each dot product is
    an exact float64 integer: len * (p-1)^2 < 2^53.
    """
    m, k = a.shape
    k2, n = b.shape
    if k != k2:
        raise ValueError(f"shape mismatch in matmul: {a.shape} @ {b.shape}")
    out = np.zeros((m, n), dtype=np.int64)
    if m == 0 or n == 0 or k == 0:
        return out
    kchunk = max(1, min(k, int(_FLOAT64_EXACT // max(1, (p - 1) ** 2))))
    bf_chunks = [
        b[k0 : min(k0 + kchunk, k)].astype(np.float64) for k0 in range(0, k, kchunk)
    ]
    # keep the float64 copy of each a-slab near 64 MB
    rchunk = max(1, min(m, (8 << 20) // max(1, k)))
    for r0 in range(0, m, rchunk):
        r1 = min(r0 + rchunk, m)
        acc = np.zeros((r1 - r0, n), dtype=np.int64)
        for ci, k0 in enumerate(range(0, k, kchunk)):
            k1 = min(k0 + kchunk, k)
            af = a[r0:r1, k0:k1].astype(np.float64)
            acc += (af @ bf_chunks[ci]).astype(np.int64)
            acc %= p
        out[r0:r1] = acc
    return out


class MatrixGF:
    """Dense matrix over GF(p) with deterministic echelon operations."""

    __slots__ = ("array", "ctx")

    def __init__(self, array, ctx: FieldContext, *, reduce: bool = True):
        arr = np.ascontiguousarray(array, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"matrix must be 2-d, got shape {arr.shape}")
        if reduce:
            arr = arr % ctx.p
        self.array = arr
        self.ctx = ctx

    @classmethod
    def zeros(cls, m: int, n: int, ctx: FieldContext) -> "MatrixGF":
        return cls(np.zeros((m, n), dtype=np.int64), ctx, reduce=False)

    @classmethod
    def identity(cls, n: int, ctx: FieldContext) -> "MatrixGF":
        return cls(np.eye(n, dtype=np.int64), ctx, reduce=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.array.shape

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    def copy(self) -> "MatrixGF":
        return MatrixGF(self.array.copy(), self.ctx, reduce=False)

    def transpose(self) -> "MatrixGF":
        return MatrixGF(np.ascontiguousarray(self.array.T), self.ctx, reduce=False)

    def is_zero(self) -> bool:
        return not self.array.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixGF):
            return NotImplemented
        return (
            self.ctx.p == other.ctx.p
            and self.shape == other.shape
            and bool(np.array_equal(self.array, other.array))
        )

    def __matmul__(self, other: "MatrixGF") -> "MatrixGF":
        if self.ctx.p != other.ctx.p:
            raise ValueError("matmul across different moduli")
        prod = matmul_mod(self.array, other.array, self.ctx.p)
        return MatrixGF(prod, self.ctx, reduce=False)

    def rref(self) -> tuple["MatrixGF", tuple[int, ...]]:
        """Reduced row echelon form (canonical) plus the pivot columns."""
        scratch = self.array.copy()
        pivots = _impl.echelon(scratch, self.ctx.p, True)
        _check_pivots(pivots, *scratch.shape)
        return MatrixGF(scratch, self.ctx, reduce=False), tuple(pivots)

    def rank(self) -> int:
        m, n = self.array.shape
        if m == 0 or n == 0:
            return 0
        # elimination scans rows per column, so stand tall matrices on end
        if m > 4 * n:
            scratch = np.ascontiguousarray(self.array.T)
        else:
            scratch = self.array.copy()
        pivots = _impl.echelon(scratch, self.ctx.p, False)
        _check_pivots(pivots, *scratch.shape)
        return len(pivots)

    def kernel_dim(self) -> int:
        return self.cols - self.rank()


def _check_pivots(pivots, m: int, n: int) -> None:
    """Rank-nullity bookkeeping asserted after every elimination."""
    if len(pivots) > min(m, n):
        raise AssertionError(f"rank {len(pivots)} exceeds min{m, n}")
    if any(b <= a for a, b in zip(pivots, pivots[1:])):
        raise AssertionError("pivot columns not strictly increasing")
    if pivots and (pivots[0] < 0 or pivots[-1] >= n):
        raise AssertionError("pivot column out of range")
