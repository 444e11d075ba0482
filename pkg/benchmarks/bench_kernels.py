"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 16 64 128] [--repeat 5]

Both paths are imported from the same module, so the environment flag does
not matter here.  Results are checked for equality before timing.
"""

import argparse
import time

import numpy as np

from artinres import _kernels as K


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(sizes, p, repeat, seed=0):
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        a = rng.integers(0, p, size=(n, n + n // 2)).astype(np.int64)
        sq = rng.integers(0, p, size=(n, n)).astype(np.int64)
        cases = [
            ("rref", lambda f: f(a.copy(), p), K.rref_numpy, getattr(K, "rref_numba", None)),
            ("matmul", lambda f: f(sq, sq, p), K.matmul_numpy, getattr(K, "matmul_numba", None)),
            ("charpoly", lambda f: f(sq.copy(), p), K.charpoly_numpy, getattr(K, "charpoly_numba", None)),
        ]
        for name, call, py, jit in cases:
            t_np = _best(lambda: call(py), repeat)
            t_jit = None
            if jit is not None:
                ref, got = call(py), call(jit)  # also warms the JIT
                ref = ref[0] if isinstance(ref, tuple) else ref
                got = got[0] if isinstance(got, tuple) else got
                assert np.array_equal(np.asarray(ref), np.asarray(got)), name
                t_jit = _best(lambda: call(jit), repeat)
            rows.append((name, n, t_np, t_jit))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 64, 128])
    ap.add_argument("-p", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.HAS_NUMBA:
        print("numba unavailable or disabled; timing the numpy path only")
    print(f"{'kernel':<10}{'n':>6}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, n, t_np, t_jit in bench(args.sizes, args.p, args.repeat):
        if t_jit is None:
            print(f"{name:<10}{n:>6}{t_np * 1e3:>12.3f}{'-':>12}{'-':>10}")
        else:
            print(f"{name:<10}{n:>6}{t_np * 1e3:>12.3f}{t_jit * 1e3:>12.3f}{t_np / t_jit:>9.1f}x")


if __name__ == "__main__":
    main()
