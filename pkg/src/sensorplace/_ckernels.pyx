# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np

cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from *:
    bint __builtin_mul_overflow(long long a, long long b, long long *res) nogil
    bint __builtin_sub_overflow(long long a, long long b, long long *res) nogil


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


def maxflow_int(int n, tails, heads, caps, sources, int sink):
    """Dinic max flow on int64 capacities (caller guarantees no overflow)."""
    cdef int m0 = len(tails)
    cdef int ns = len(sources)
    cdef int N = n + 1
    cdef int ss = n
    cdef int A = 2 * (m0 + ns)
    cdef long long big = 1
    cdef int i, a, u, v, idx, cut_at, head_ptr, qh, qt
    cdef long long f, total = 0
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cap_arr = np.zeros(A, dtype=np.int64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] head_arr = np.zeros(A, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] deg = np.zeros(N + 1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] adj = np.zeros(A, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] fill
    cdef cnp.ndarray[cnp.int32_t, ndim=1] level = np.zeros(N, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] it = np.zeros(N, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] queue = np.zeros(N, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] path = np.zeros(N + 1, dtype=np.int32)
    cdef int plen

    for i in range(m0):
        big += <long long>caps[i]
    for i in range(m0):
        u = tails[i]
        v = heads[i]
        head_arr[2 * i] = v
        head_arr[2 * i + 1] = u
        cap_arr[2 * i] = caps[i]
        deg[u + 1] += 1
        deg[v + 1] += 1
    for i in range(ns):
        u = sources[i]
        a = 2 * (m0 + i)
        head_arr[a] = u
        head_arr[a + 1] = ss
        cap_arr[a] = big
        deg[ss + 1] += 1
        deg[u + 1] += 1
    for i in range(N):
        deg[i + 1] += deg[i]
    fill = deg[:N].copy()
    for a in range(A):
        # tail of arc a is the head of its twin
        u = head_arr[a ^ 1]
        adj[fill[u]] = a
        fill[u] += 1

    while True:
        for i in range(N):
            level[i] = -1
        level[ss] = 0
        qh = 0
        qt = 0
        queue[qt] = ss
        qt += 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            for idx in range(deg[u], deg[u + 1]):
                a = adj[idx]
                v = head_arr[a]
                if cap_arr[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue[qt] = v
                    qt += 1
        if level[sink] < 0:
            break
        for i in range(N):
            it[i] = deg[i]
        plen = 0
        u = ss
        while True:
            if u == sink:
                f = cap_arr[path[0]]
                for i in range(1, plen):
                    if cap_arr[path[i]] < f:
                        f = cap_arr[path[i]]
                total += f
                cut_at = -1
                for i in range(plen):
                    a = path[i]
                    cap_arr[a] -= f
                    cap_arr[a ^ 1] += f
                    if cut_at < 0 and cap_arr[a] == 0:
                        cut_at = i
                plen = cut_at
                if plen > 0:
                    u = head_arr[path[plen - 1]]
                else:
                    u = ss
                continue
            head_ptr = 0
            while it[u] < deg[u + 1]:
                a = adj[it[u]]
                v = head_arr[a]
                if cap_arr[a] > 0 and level[v] == level[u] + 1:
                    path[plen] = a
                    plen += 1
                    u = v
                    head_ptr = 1
                    break
                it[u] += 1
            if not head_ptr:
                if u == ss:
                    break
                level[u] = -1
                plen -= 1
                a = path[plen]
                u = head_arr[a ^ 1]
                it[u] += 1

    flows = [int(caps[i]) - int(cap_arr[2 * i]) for i in range(m0)]
    for i in range(N):
        level[i] = 0
    level[ss] = 1
    qh = 0
    qt = 0
    queue[qt] = ss
    qt += 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        for idx in range(deg[u], deg[u + 1]):
            a = adj[idx]
            v = head_arr[a]
            if cap_arr[a] > 0 and level[v] == 0:
                level[v] = 1
                queue[qt] = v
                qt += 1
    reach = [bool(level[i]) for i in range(n)]
    return int(total), flows, reach


def pivot_rows_int64(cnp.ndarray[cnp.int64_t, ndim=2] T, int r, int q,
                     cnp.ndarray[cnp.int64_t, ndim=1] rows):
    """In-place elimination of column ``q`` from ``rows`` (int64).

    Returns the number of rows completed.  If that is less than
    ``len(rows)`` an intermediate product overflowed; the remaining rows
    (and the pivot row) are untouched.
    """
    cdef Py_ssize_t ncol = T.shape[1]
    cdef Py_ssize_t nr = rows.shape[0]
    cdef Py_ssize_t k, j
    cdef long long p = T[r, q]
    cdef long long ap = p if p > 0 else -p
    cdef long long sg = 1 if p > 0 else -1
    cdef long long c, x, y, g
    cdef long long *buf = <long long *>malloc(ncol * sizeof(long long))
    cdef long long *prow = <long long *>malloc(ncol * sizeof(long long))
    cdef long long i
    cdef bint bad
    if buf == NULL or prow == NULL:
        free(buf)
        free(prow)
        raise MemoryError()
    try:
        for j in range(ncol):
            prow[j] = T[r, j]
        for k in range(nr):
            i = rows[k]
            c = sg * T[i, q]
            g = 0
            bad = False
            for j in range(ncol):
                if __builtin_mul_overflow(ap, T[i, j], &x):
                    bad = True
                    break
                if __builtin_mul_overflow(c, prow[j], &y):
                    bad = True
                    break
                if __builtin_sub_overflow(x, y, &buf[j]):
                    bad = True
                    break
                if g != 1 and buf[j] != 0:
                    g = _gcd(g, buf[j])
            if bad:
                return k
            if g == 0:
                g = 1
            for j in range(ncol):
                T[i, j] = buf[j] // g
        g = 0
        for j in range(ncol):
            if prow[j] != 0:
                g = _gcd(g, prow[j])
                if g == 1:
                    break
        if g > 1:
            for j in range(ncol):
                T[r, j] = prow[j] // g
        return nr
    finally:
        free(buf)
        free(prow)
