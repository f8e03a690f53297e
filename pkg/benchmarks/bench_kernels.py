"""Time the compiled and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 20000] [--r 20000] [--deg 12] [--repeat 20]

Prints one CSV row per (kernel, backend) with the median time and the
speedup of the compiled backend over numpy.
"""

import argparse
import statistics
import time

import numpy as np

from relaxround import kernels
from relaxround.greedy import greedy_select
from relaxround.instance import CoverageInstance
from relaxround.objective import SmoothingContext
from relaxround.reward import multi_coverage


def make_instance(n, r, deg, seed):
    rng = np.random.default_rng(seed)
    d = rng.integers(1, 2 * deg, size=r)
    js = np.repeat(np.arange(r), d)
    edges = np.unique(np.column_stack([rng.integers(0, n, size=js.size), js]), axis=0)
    return CoverageInstance.from_edges(n, r, edges)


def median_time(fn, repeat):
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--r", type=int, default=20000)
    ap.add_argument("--deg", type=int, default=12)
    ap.add_argument("--c", type=int, default=2)
    ap.add_argument("--k", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    inst = make_instance(args.n, args.r, args.deg, args.seed)
    rw = multi_coverage(args.c)
    ctx = SmoothingContext(inst, rw, 0.01)
    x = np.full(inst.n, args.k / inst.n)
    grad = np.empty(inst.n)
    tab = rw.table(int(inst.degrees.max()) + 1)
    slopes = rw.slopes(int(inst.degrees.max()) + 1)
    counts = np.zeros(inst.r, dtype=np.int64)
    ip, ix, w = inst.right_indptr, inst.right_indices, inst.weights
    lp, li = inst.left_indptr, inst.left_indices

    print(f"# n={inst.n} r={inst.r} m={inst.m} backends={','.join(kernels.available_backends())}")
    print("kernel,backend,median_seconds,speedup")
    for name, call in [
        ("smooth_value_grad", lambda b: b.smooth_eval(x, ip, ix, w, ctx.npieces, ctx.slopes, ctx.intercepts, ctx.mu, grad)),
        ("fractional_eval", lambda b: b.fractional_eval(x, ip, ix, w, tab)),
        ("all_gains", lambda b: b.all_gains(lp, li, w, counts, slopes)),
    ]:
        times = {}
        for be in kernels.available_backends():
            b = kernels.get_backend(be)
            times[be] = median_time(lambda: call(b), args.repeat)
        base = times["python"]
        for be, t in times.items():
            print(f"{name},{be},{t:.6f},{base / t:.1f}")

    # greedy end to end, switching the module-level dispatch
    from relaxround import greedy as greedy_mod

    times = {}
    for be in kernels.available_backends():
        b = kernels.get_backend(be)
        saved = greedy_mod.kernels
        greedy_mod.kernels = b
        try:
            times[be] = median_time(lambda: greedy_select(inst, rw, args.k), max(1, args.repeat // 5))
        finally:
            greedy_mod.kernels = saved
    for be, t in times.items():
        print(f"greedy_k{args.k},{be},{t:.6f},{times['python'] / t:.1f}")


if __name__ == "__main__":
    main()
