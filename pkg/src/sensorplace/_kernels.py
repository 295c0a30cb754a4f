"""Kernel dispatch: compiled int64 kernels when built, Python otherwise.

Set ``SENSORPLACE_PURE=1`` before import to force the Python kernels.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

_c = None
if not os.environ.get("SENSORPLACE_PURE"):
    try:
        from . import _ckernels as _c  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _c = None

BACKEND = "cython" if _c is not None else "python"

# headroom so the internal super-arc capacity and residual sums stay in int64
_FLOW_LIMIT = 2**61


def maxflow_int(n, tails, heads, caps, sources, sink, backend: str | None = None):
    use_c = _c is not None if backend is None else backend == "cython"
    if use_c and _c is not None and sum(caps) < _FLOW_LIMIT:
        return _c.maxflow_int(n, list(tails), list(heads), list(caps), list(sources), sink)
    return _pykernels.maxflow_int(n, tails, heads, caps, sources, sink)


def pivot_rows(T: np.ndarray, r: int, q: int, rows: np.ndarray,
               backend: str | None = None) -> np.ndarray:
    use_c = _c is not None if backend is None else backend == "cython"
    if use_c and _c is not None and T.dtype == np.int64:
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        done = _c.pivot_rows_int64(T, r, q, rows)
        if done == len(rows):
            return T
        # overflow part way: finish the remaining rows exactly on Python ints
        return _pykernels.pivot_rows(T.astype(object), r, q, rows[done:])
    return _pykernels.pivot_rows(T, r, q, rows)
