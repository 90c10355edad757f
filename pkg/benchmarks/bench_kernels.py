"""Time the compiled DP kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--n-max 14] [--repeat 3]
"""
import argparse
import time

import numpy as np

from symsbfe import _kernels_py
from symsbfe.generate import generate

try:
    from symsbfe import _kernels as compiled
except ImportError:
    compiled = None


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _workload(mod, inst, R):
    ids = [R.block_index(j) for j in range(R.n + 1)]
    dist = mod.ones_distribution(inst.probs)
    w = mod.class_weight(dist, R.entries, 1)
    mod.solve(inst.costs, inst.probs, ids)
    return mod.solve(inst.costs, inst.probs, ids, w)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=8)
    ap.add_argument("--n-max", type=int, default=14)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--python-max", type=int, default=12,
                    help="skip the fallback above this n (it is slow)")
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'n':>3} {'states':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in range(args.n_min, args.n_max + 1):
        inst, R = generate(n, min(4, n + 1), seed=n)
        t_py = t_cy = float("nan")
        if n <= args.python_max:
            t_py = _best_of(lambda: _workload(_kernels_py, inst, R), args.repeat)
        if compiled is not None:
            t_cy = _best_of(lambda: _workload(compiled, inst, R), args.repeat)
            if n <= args.python_max:
                a = _workload(_kernels_py, inst, R)
                b = _workload(compiled, inst, R)
                assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        states = (1 << n) * (n + 1)
        print(f"{n:>3} {states:>10} {t_py:>10.4f} {t_cy:>10.4f} {t_py / t_cy:>8.1f}")


if __name__ == "__main__":
    main()
