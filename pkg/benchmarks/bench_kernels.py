"""Compare the compiled clustering kernels against the pure-numpy fallback.

Both backends are imported side by side (no NAPKIT_PURE round trips), each
kernel is timed best-of-R on a few problem sizes, and the results land in a
small table. Run with:

    python3 benchmarks/bench_kernels.py [--repeats 5] [--sizes 500,1000,2000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from napkit._kernels import fallback


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench(sizes: list[int], dims: int, k: int, repeats: int) -> list[dict]:
    try:
        from napkit._kernels import _core as compiled
    except ImportError:
        compiled = None

    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        points = np.ascontiguousarray(rng.normal(size=(n, dims)))
        core = fallback.core_distances(points, k)
        cases = {
            "core_distances": lambda impl: impl.core_distances(points, k),
            "prim_mst": lambda impl: impl.prim_mst(points, core),
        }
        for name, call in cases.items():
            fb = best_of(lambda: call(fallback), repeats)
            row = {"kernel": name, "n": n, "fallback_ms": fb * 1e3}
            if compiled is not None:
                co = best_of(lambda: call(compiled), repeats)
                row["compiled_ms"] = co * 1e3
                row["speedup"] = fb / co
            rows.append(row)
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="500,1000,2000",
                        help="comma-separated point counts")
    parser.add_argument("--dims", type=int, default=8)
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s]
    rows = bench(sizes, args.dims, args.k, args.repeats)

    has_compiled = "compiled_ms" in rows[0]
    if not has_compiled:
        print("compiled extension not built; timing fallback only\n")
    header = f"{'kernel':<16} {'n':>6} {'fallback':>12}"
    if has_compiled:
        header += f" {'compiled':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for row in rows:
        line = f"{row['kernel']:<16} {row['n']:>6} {row['fallback_ms']:>10.2f}ms"
        if has_compiled:
            line += f" {row['compiled_ms']:>10.2f}ms {row['speedup']:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
