import random

import numpy as np
import pytest

from sensorplace import _kernels, _pykernels
from sensorplace.lp import solve_lp
from sensorplace import build_pc, make_grid, randomize_capacities, sample_roles

needs_c = pytest.mark.skipif(_kernels._c is None, reason="compiled kernels not built")


@needs_c
def test_maxflow_backends_agree():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(2, 15)
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3]
        caps = [rng.randint(0, 50) for _ in arcs]
        t = rng.randrange(n)
        S = rng.sample([v for v in range(n) if v != t], rng.randint(1, min(3, n - 1)))
        tails, heads = [a for a, _ in arcs], [b for _, b in arcs]
        c = _kernels.maxflow_int(n, tails, heads, caps, S, t, backend="cython")
        p = _kernels.maxflow_int(n, tails, heads, caps, S, t, backend="python")
        assert c[0] == p[0]
        assert [bool(x) for x in c[2]] == [bool(x) for x in p[2]]


@needs_c
def test_pivot_backends_agree():
    rng = np.random.default_rng(0)
    for _ in range(50):
        T = rng.integers(-9, 10, size=(6, 8)).astype(np.int64)
        r, q = 2, 3
        T[r, q] = 5
        rows = np.array([i for i in range(6) if i != r and T[i, q] != 0], dtype=np.int64)
        a = _kernels.pivot_rows(T.copy(), r, q, rows, backend="cython")
        b = _kernels.pivot_rows(T.astype(object), r, q, rows, backend="python")
        assert (np.asarray(a, dtype=object) == b).all()


@needs_c
def test_pivot_overflow_promotes():
    T = np.array([[2**62, 3], [5, 2**61]], dtype=np.int64)
    out = _kernels.pivot_rows(T.copy(), 1, 1, np.array([0]), backend="cython")
    ref = _pykernels.pivot_rows(T.astype(object), 1, 1, np.array([0]))
    assert (np.asarray(out, dtype=object) == ref).all()


def test_exact_simplex_matches_across_backends(monkeypatch):
    g = sample_roles(randomize_capacities(make_grid(3), 1, 9, 2), 2, 2, 5)
    lp = build_pc(g, 2).lp
    ref = solve_lp(lp, method="simplex")
    monkeypatch.setattr(_kernels, "_c", None)
    pure = solve_lp(lp, method="simplex")
    assert pure.objective == ref.objective
    assert pure.assignment == ref.assignment
