"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times Dinic max flow on grid instances and tableau pivoting on random
integer matrices, once per backend, and checks that both agree.  The last
row times a whole branch-and-bound solve with each backend.
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from sensorplace import _kernels, build_pc, make_grid, randomize_capacities, sample_roles, solve_exact
from sensorplace.flow import _scale


def flow_cases(sides, seed=0):
    rng = random.Random(seed)
    cases = []
    for side in sides:
        g = randomize_capacities(make_grid(side), 100, 200, seed)
        _, caps = _scale(g.capacities)
        n = g.n
        S = rng.sample(range(n), max(1, n // 10))
        t = rng.choice([v for v in range(n) if v not in S])
        cases.append((side, (n, [u for u, _ in g.edges], [v for _, v in g.edges], caps, S, t)))
    return cases


def pivot_case(rows, cols, seed=0):
    rng = np.random.default_rng(seed)
    T = rng.integers(-20, 21, size=(rows, cols)).astype(np.int64)
    T[0, 0] = 7
    return T, np.arange(1, rows, dtype=np.int64)


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels._c is None:
        print("compiled kernels are not built; only the Python backend is available")
        return 1
    print(f"{'kernel':<22}{'cython s':>12}{'python s':>12}{'speedup':>10}")
    for side, case in flow_cases((6, 10, 17)):
        tc, rc = timed(lambda: _kernels.maxflow_int(*case, backend="cython"), args.repeat)
        tp, rp = timed(lambda: _kernels.maxflow_int(*case, backend="python"), args.repeat)
        assert rc[0] == rp[0]
        print(f"{'maxflow grid ' + str(side) + 'x' + str(side):<22}{tc:>12.6f}{tp:>12.6f}{tp / tc:>10.1f}")
    for rows, cols in ((200, 400), (500, 1500)):
        T, idx = pivot_case(rows, cols)
        tc, rc = timed(lambda: _kernels.pivot_rows(T.copy(), 0, 0, idx, backend="cython"), args.repeat)
        tp, rp = timed(lambda: _kernels.pivot_rows(T.copy(), 0, 0, idx, backend="python"), args.repeat)
        assert (np.asarray(rc) == np.asarray(rp)).all()
        print(f"{f'pivot {rows}x{cols}':<22}{tc:>12.6f}{tp:>12.6f}{tp / tc:>10.1f}")
    # end to end: an exact PC solve on a 5x5 grid, with the dispatcher forced each way
    g = sample_roles(randomize_capacities(make_grid(5), 100, 200, 1), 3, 5, 1)
    f = build_pc(g, 2)
    tc, rc = timed(lambda: solve_exact(f).objective, 1)
    saved, _kernels._c = _kernels._c, None
    try:
        tp, rp = timed(lambda: solve_exact(f).objective, 1)
    finally:
        _kernels._c = saved
    assert rc == rp
    print(f"{'exact PC 5x5, k=2':<22}{tc:>12.6f}{tp:>12.6f}{tp / tc:>10.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
