"""Compare the compiled and pure-Python hitting-set kernels.

    python3 benchmarks/bench_kernels.py [--seed 0] [--repeat 3]

Random conflict graphs with one planted optimum are solved by both backends;
the script checks that they agree and prints wall times and the speedup.
"""

from __future__ import annotations

import argparse
import random
import time

from cqarepair import _kernels_py

try:
    from cqarepair import _ckernels
except ImportError:
    _ckernels = None


def workload(seed: int):
    rng = random.Random(seed)
    cases = []
    for n, m, arity in [(80, 140, 2), (120, 200, 2), (150, 240, 2), (45, 90, 3), (60, 110, 3)]:
        edges = [tuple(rng.sample(range(n), arity)) for _ in range(m)]
        weights = [rng.randint(1, 5) for _ in range(n)]
        cases.append((f"n={n} m={m} d={arity}", n, edges, weights))
    return cases


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; only the Python backend is available")
    print(f"{'case':<22}{'task':<12}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for name, n, edges, weights in workload(args.seed):
        tasks = [
            ("min", lambda k: k.min_hitting_set(n, edges)),
            ("min-weight", lambda k: k.min_hitting_set(n, edges, weights)),
        ]
        for task, run in tasks:
            tp, rp = timed(lambda: run(_kernels_py), args.repeat)
            if _ckernels is None:
                print(f"{name:<22}{task:<12}{tp:>10.4f}{'-':>10}{'-':>9}")
                continue
            tc, rc = timed(lambda: run(_ckernels), args.repeat)
            if rp[0] != rc[0]:
                raise SystemExit(f"backends disagree on {name} {task}: {rp[0]} vs {rc[0]}")
            print(f"{name:<22}{task:<12}{tp:>10.4f}{tc:>10.4f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
