"""Compare the compiled and pure-Python echelon kernels on matched inputs.

Both backends are imported side by side, so this reports honest wall-clock
ratios on identical matrices and asserts they agree on ranks and reduced
forms along the way.  Run as: python3 benchmarks/bench_rank.py [--full]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from modbetti import _kernels_py
from modbetti.gfp import DEFAULT_PRIME, FieldContext, MatrixGF

try:
    from modbetti import _kernels
except ImportError:
    _kernels = None


def _time_echelon(impl, a: np.ndarray, p: int, full: bool) -> tuple[float, list, np.ndarray]:
    work = a.copy()
    t0 = time.perf_counter()
    pivots = impl.echelon(work, p, full)
    return time.perf_counter() - t0, list(pivots), work


def bench_kernels(p: int, shapes, full: bool) -> None:
    rng = np.random.Generator(np.random.PCG64(7))
    mode = "rref" if full else "rank"
    print(f"\nechelon mode={mode} p={p}")
    print(f"{'shape':>14} {'python':>10} {'cython':>10} {'speedup':>8}")
    for m, n in shapes:
        a = rng.integers(0, p, size=(m, n), dtype=np.int64)
        t_py, piv_py, out_py = _time_echelon(_kernels_py, a, p, full)
        if _kernels is None:
            print(f"{m:>6}x{n:<7} {t_py:>9.3f}s {'n/a':>10}")
            continue
        t_cy, piv_cy, out_cy = _time_echelon(_kernels, a, p, full)
        assert piv_py == piv_cy, "backends disagree on pivots"
        if full:
            assert np.array_equal(out_py, out_cy), "backends disagree on RREF"
        print(f"{m:>6}x{n:<7} {t_py:>9.3f}s {t_cy:>9.3f}s {t_py / t_cy:>7.1f}x")


def bench_matmul(p: int, sizes) -> None:
    ctx = FieldContext(p)
    rng = np.random.Generator(np.random.PCG64(11))
    print(f"\nmatmul_mod p={p} (BLAS path, backend independent)")
    for n in sizes:
        a = MatrixGF(rng.integers(0, p, size=(n, n), dtype=np.int64), ctx)
        b = MatrixGF(rng.integers(0, p, size=(n, n), dtype=np.int64), ctx)
        t0 = time.perf_counter()
        a @ b
        dt = time.perf_counter() - t0
        print(f"{n:>6}x{n:<6} {dt:>9.3f}s  {2 * n**3 / dt / 1e9:6.2f} Gop/s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--full", action="store_true", help="add the larger shapes")
    ap.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    args = ap.parse_args()

    if _kernels is None:
        print("compiled kernel unavailable; timing the pure backend only")
    shapes = [(200, 300), (400, 600), (800, 1200)]
    if args.full:
        shapes.append((1600, 2400))
    bench_kernels(args.prime, shapes, full=False)
    bench_kernels(args.prime, shapes[: 2 if not args.full else 3], full=True)
    bench_matmul(args.prime, [256, 512] + ([1024] if args.full else []))


if __name__ == "__main__":
    main()
