"""Timing comparison of the numba and numpy transform kernels.

Runs dft_many and convolve on a few group signatures under each backend
and prints per-call wall times plus the speedup ratio.  The numba path
is warmed once per shape so jit compilation does not pollute the numbers.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --repeats 9 --rows 48 --seed 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qchar.groups import FiniteAbelianGroup
from qchar.kernels import HAS_NUMBA, convolve, dft_many, set_backend

SIGNATURES = [(64,), (128,), (360,), (16, 16), (8, 8, 8), (1024,), (2048,)]


def _best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_group(sig: tuple[int, ...], rows: int, repeats: int, rng) -> dict:
    group = FiniteAbelianGroup(sig)
    n = group.order
    mat = rng.normal(size=(rows, n)) + 1j * rng.normal(size=(rows, n))
    p = rng.random(n)
    p /= p.sum()
    q = rng.random(n)
    q /= q.sum()

    results = {"signature": sig, "order": n}
    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    for name in backends:
        prev = set_backend(name)
        try:
            # warm: jit compile and populate caches before timing
            ref_d = dft_many(group, mat)
            ref_c = convolve(group, p, q)
            results[f"dft_{name}"] = _best_of(lambda: dft_many(group, mat), repeats)
            results[f"conv_{name}"] = _best_of(lambda: convolve(group, p, q), repeats)
            results.setdefault("_ref", (ref_d, ref_c))
        finally:
            set_backend(prev)

    if HAS_NUMBA:
        ref_d, ref_c = results.pop("_ref")
        prev = set_backend("numba")
        try:
            dd = np.abs(dft_many(group, mat) - ref_d).max()
            dc = np.abs(convolve(group, p, q) - ref_c).max()
        finally:
            set_backend(prev)
        results["max_dev"] = max(float(dd), float(dc))
    else:
        results.pop("_ref", None)
    return results


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5, help="timed runs per case, best kept")
    ap.add_argument("--rows", type=int, default=32, help="rows in the dft_many batch")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    if not HAS_NUMBA:
        print("numba not importable; timing the numpy backend only")

    header = f"{'group':>12} {'order':>6} {'dft numpy':>11} {'dft numba':>11} {'ratio':>7} {'conv numpy':>11} {'conv numba':>11} {'ratio':>7}"
    print(header)
    print("-" * len(header))
    for sig in SIGNATURES:
        r = bench_group(sig, args.rows, args.repeats, rng)
        label = "x".join(str(k) for k in sig)

        def fmt(key: str) -> str:
            return f"{r[key] * 1e3:9.3f}ms" if key in r else f"{'-':>11}"

        def ratio(a: str, b: str) -> str:
            if a in r and b in r and r[b] > 0:
                return f"{r[a] / r[b]:6.1f}x"
            return f"{'-':>7}"

        print(
            f"{label:>12} {r['order']:>6} {fmt('dft_numpy')} {fmt('dft_numba')} "
            f"{ratio('dft_numpy', 'dft_numba')} {fmt('conv_numpy')} {fmt('conv_numba')} "
            f"{ratio('conv_numpy', 'conv_numba')}"
        )
        if "max_dev" in r and r["max_dev"] > 1e-9:
            print(f"{'':>12} backend deviation {r['max_dev']:.2e} exceeds 1e-9")
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
