#!/usr/bin/env python3
"""Benchmark the compiled statevector kernels against the numpy fallback.

Times small-unitary application and oracle-style row permutation over a
range of state dimensions, printing microseconds per operation and the
speedup of the compiled backend.

Run from the repository root after building the extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from sablab._kernels import _pykernels

try:
    from sablab._kernels import _core
except ImportError:
    _core = None


def _time(fn, *args, repeats: int = 5, min_seconds: float = 0.05) -> float:
    """Best-of-repeats seconds per call, calibrated to a minimal runtime."""
    calls = 1
    while True:
        start = time.perf_counter()
        for _ in range(calls):
            fn(*args)
        elapsed = time.perf_counter() - start
        if elapsed >= min_seconds:
            break
        calls *= 2
    best = elapsed / calls
    for _ in range(repeats - 1):
        start = time.perf_counter()
        for _ in range(calls):
            fn(*args)
        best = min(best, (time.perf_counter() - start) / calls)
    return best


def bench_apply_block(exponents: list[int]) -> None:
    print("\napply_block: k x k unitary on a dense state (microseconds/op)")
    print(f"{'state dim':>10} {'k':>3} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for exp in exponents:
        n_index = 8
        work = 2 ** (exp - 5)  # index 8 x symbol 4 x workspace
        dims = (n_index, 4) + (2,) * (exp - 5)
        total = int(np.prod(dims))
        state = rng.standard_normal(total) + 1j * rng.standard_normal(total)
        for axes, k in (((1,), 4), ((0,), 8), ((1, 2), 8)):
            if len(dims) <= max(axes):
                continue
            z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
            u, _ = np.linalg.qr(z)
            t_py = _time(_pykernels.apply_block, state.copy(), dims, axes, u) * 1e6
            if _core is None:
                print(f"{total:>10} {k:>3} {t_py:>10.1f} {'-':>10} {'-':>8}")
                continue
            t_c = _time(_core.apply_block, state.copy(), dims, axes, u) * 1e6
            print(f"{total:>10} {k:>3} {t_py:>10.1f} {t_c:>10.1f} {t_py / t_c:>7.2f}x")
        del work


def bench_permute_rows(exponents: list[int]) -> None:
    print("\npermute_rows: oracle-style row gather (microseconds/op)")
    print(f"{'state dim':>10} {'rows':>6} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    rng = np.random.default_rng(1)
    for exp in exponents:
        rows = 8 * 4  # index 8, weak symbol 4
        width = 2**exp // rows
        total = rows * width
        state = rng.standard_normal(total) + 1j * rng.standard_normal(total)
        perm = rng.permutation(rows)
        t_py = _time(_pykernels.permute_rows, state.copy(), perm, width) * 1e6
        if _core is None:
            print(f"{total:>10} {rows:>6} {t_py:>10.1f} {'-':>10} {'-':>8}")
            continue
        t_c = _time(_core.permute_rows, state.copy(), perm, width) * 1e6
        print(f"{total:>10} {rows:>6} {t_py:>10.1f} {t_c:>10.1f} {t_py / t_c:>7.2f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--exponents",
        type=int,
        nargs="+",
        default=[14, 16, 18, 20],
        help="log2 of the state dimensions to benchmark",
    )
    args = parser.parse_args()
    if _core is None:
        print("compiled kernels not built; showing the numpy backend only")
    bench_apply_block(args.exponents)
    bench_permute_rows(args.exponents)


if __name__ == "__main__":
    main()
