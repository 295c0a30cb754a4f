"""Pure-Python implementations of the hot kernels.

Semantics match ``_ckernels.pyx`` exactly; these run on Python integers
(unbounded) and numpy arrays of either ``int64`` or ``object`` dtype.
"""
from __future__ import annotations

from collections import deque

import numpy as np

INT64_MAX = 2**63 - 1


def maxflow_int(n, tails, heads, caps, sources, sink):
    """Dinic max flow from an internal super vertex feeding ``sources``.

    Returns ``(value, flows, reach)`` where ``flows[i]`` is the flow on arc
    ``i`` and ``reach[v]`` tells whether ``v`` is reachable from the super
    vertex in the final residual graph (the canonical min-cut side).
    """
    N = n + 1
    ss = n
    big = sum(caps) + 1
    head: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(N)]

    def add(u, v, c):
        adj[u].append(len(head))
        head.append(v)
        cap.append(c)
        adj[v].append(len(head))
        head.append(u)
        cap.append(0)

    for u, v, c in zip(tails, heads, caps):
        add(u, v, c)
    m = len(head)
    for s in sources:
        add(ss, s, big)

    total = 0
    if sink in sources:
        raise ValueError("sink is a source")
    while True:
        level = [-1] * N
        level[ss] = 0
        dq = deque([ss])
        while dq:
            u = dq.popleft()
            for a in adj[u]:
                if cap[a] > 0 and level[head[a]] < 0:
                    level[head[a]] = level[u] + 1
                    dq.append(head[a])
        if level[sink] < 0:
            break
        it = [0] * N
        path: list[int] = []
        u = ss
        while True:
            if u == sink:
                f = min(cap[a] for a in path)
                total += f
                cut = None
                for idx, a in enumerate(path):
                    cap[a] -= f
                    cap[a ^ 1] += f
                    if cut is None and cap[a] == 0:
                        cut = idx
                del path[cut:]
                u = head[path[-1]] if path else ss
                continue
            adv = False
            au = adj[u]
            while it[u] < len(au):
                a = au[it[u]]
                v = head[a]
                if cap[a] > 0 and level[v] == level[u] + 1:
                    path.append(a)
                    u = v
                    adv = True
                    break
                it[u] += 1
            if not adv:
                if u == ss:
                    break
                level[u] = -1
                a = path.pop()
                u = head[a ^ 1]
                it[u] += 1

    flows = [caps[i] - cap[2 * i] for i in range(m // 2)]
    reach = [False] * N
    reach[ss] = True
    dq = deque([ss])
    while dq:
        u = dq.popleft()
        for a in adj[u]:
            if cap[a] > 0 and not reach[head[a]]:
                reach[head[a]] = True
                dq.append(head[a])
    return total, flows, reach[:n]


def _absmax(a) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def pivot_rows(T: np.ndarray, r: int, q: int, rows: np.ndarray) -> np.ndarray:
    """Eliminate column ``q`` from ``rows`` using pivot row ``r``.

    Each row ``i`` becomes ``|p| * T[i] - sign(p) * T[i, q] * T[r]`` with
    ``p = T[r, q]``, then is divided by the gcd of its entries.  Row
    orientation (sign) is preserved.  Returns the (possibly promoted to
    ``object``) array.
    """
    p = int(T[r, q])
    ap, sg = abs(p), (1 if p > 0 else -1)
    if len(rows):
        sub = T[rows]
        coef = sub[:, q]
        if T.dtype != object:
            bound = ap * _absmax(sub) + _absmax(coef) * _absmax(T[r])
            if bound > INT64_MAX:
                T = T.astype(object)
                sub = T[rows]
                coef = sub[:, q]
        new = ap * sub - (sg * coef)[:, None] * T[r][None, :]
        g = np.gcd.reduce(new, axis=1)
        g[g == 0] = 1
        new //= g[:, None]
        T[rows] = new
    g = int(np.gcd.reduce(T[r]))
    if g > 1:
        T[r] //= g
    return T
