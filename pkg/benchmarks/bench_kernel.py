"""Compare the compiled and pure-Python separation kernels.

Times ``separated_pairs`` (every canonical statement of a graph) on seeded
random chain graphs of growing size and checks that both backends agree.

    python3 benchmarks/bench_kernel.py --sizes 6 8 10 12 --graphs 5
"""

import argparse
import random
import statistics
import time

from cgmeek import _kernel_py
from cgmeek.generate import random_cg
from cgmeek.separation import _masks

try:
    from cgmeek import _kernel as _compiled
except ImportError:
    _compiled = None


def masks(G):
    _, _, und, ch, pa = _masks(G)
    return und, ch, pa


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), result


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[6, 8, 10, 12])
    p.add_argument("--graphs", type=int, default=5, help="random graphs per size")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--edge-prob", type=float, default=0.4)
    args = p.parse_args(argv)

    if _compiled is None:
        print("compiled kernel not built; only the Python backend is timed")
    print(f"{'n':>3} {'statements':>11} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        py_t, cy_t, count = [], [], 0
        for i in range(args.graphs):
            G = random_cg(random.Random(args.seed * 1_000_003 + n * 1000 + i), n, args.edge_prob)
            m = masks(G)
            t, expected = best_of(_kernel_py.separated_pairs, m, args.repeat)
            py_t.append(t)
            count += len(expected)
            if _compiled is not None:
                t, got = best_of(_compiled.separated_pairs, m, args.repeat)
                cy_t.append(t)
                if list(got) != list(expected):
                    raise SystemExit(f"backends disagree at n={n}, graph {i}")
        py = statistics.mean(py_t)
        if cy_t:
            cy = statistics.mean(cy_t)
            print(f"{n:>3} {count:>11} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")
        else:
            print(f"{n:>3} {count:>11} {py:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
