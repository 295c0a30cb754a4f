"""Exact certification of a floating-point optimal basis.

HiGHS proposes a basis.  The basic columns and the tight rows form a square
system that is solved over the rationals (python-flint) for the primal
values and, transposed, for the row duals.  The basis is accepted only if
every primal bound, every row range and every reduced-cost sign holds
exactly; the point is then an exact optimal vertex of the LP.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

try:
    import flint
    import highspy
except ImportError:  # pragma: no cover - both are declared dependencies
    flint = highspy = None


def available() -> bool:
    return highspy is not None and flint is not None


def _fq(x: Fraction):
    return flint.fmpq(x.numerator, x.denominator)


def _fr(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def certified_solve(lp):
    """Return an exact optimal ``LpSolution`` or ``None`` if not certified."""
    from .lp import OPTIMAL, LpSolution

    inf = highspy.kHighsInf
    BS = highspy.HighsBasisStatus
    rows = lp._rows
    nv, m = len(lp.variables), len(rows)
    sgn = 1 if lp.sense == "min" else -1
    cost = [Fraction(0)] * nv
    for name, c in lp.objective.items():
        cost[lp.index[name]] = sgn * c

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("solver", "simplex")
    h.setOptionValue("threads", 1)
    lo = np.array([-inf if v.lo is None else float(v.lo) for v in lp.variables])
    hi = np.array([inf if v.hi is None else float(v.hi) for v in lp.variables])
    h.addVars(nv, lo, hi)
    if nv:
        h.changeColsCost(nv, np.arange(nv, dtype=np.int32), np.array([float(c) for c in cost]))
    if m:
        rlo, rhi, starts, idx, val = [], [], [], [], []
        for cols, coefs, rhs, sense in rows:
            rlo.append(-inf if sense == "<=" else float(rhs))
            rhi.append(inf if sense == ">=" else float(rhs))
            starts.append(len(idx))
            idx.extend(cols)
            val.extend(float(a) for a in coefs)
        h.addRows(m, np.array(rlo), np.array(rhi), len(idx), np.array(starts, dtype=np.int32),
                  np.array(idx, dtype=np.int32), np.array(val))
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        return None
    basis = h.getBasis()
    cstat, rstat = list(basis.col_status), list(basis.row_status)

    basic = [j for j in range(nv) if cstat[j] == BS.kBasic]
    tight = [i for i in range(m) if rstat[i] != BS.kBasic]
    if len(basic) != len(tight):
        return None
    fq = flint.fmpq
    lo_q = [None if v.lo is None else _fq(v.lo) for v in lp.variables]
    hi_q = [None if v.hi is None else _fq(v.hi) for v in lp.variables]
    x: list = [None] * nv
    for j in range(nv):
        if cstat[j] == BS.kBasic:
            continue
        if cstat[j] == BS.kLower:
            x[j] = lo_q[j]
        elif cstat[j] == BS.kUpper:
            x[j] = hi_q[j]
        elif cstat[j] == BS.kZero and lo_q[j] is None and hi_q[j] is None:
            x[j] = fq(0)
        if x[j] is None:
            return None

    # tight rows sit exactly on the bound HiGHS reports
    pos = {j: k for k, j in enumerate(basic)}
    nb = len(basic)
    row_side = {}
    for i in tight:
        sense = rows[i][3]
        if sense == "==":
            row_side[i] = 0
        elif rstat[i] == BS.kLower and sense == ">=":
            row_side[i] = 1
        elif rstat[i] == BS.kUpper and sense == "<=":
            row_side[i] = -1
        else:
            return None
    ydual = {}
    if nb:
        A = flint.fmpq_mat(nb, nb)
        b = flint.fmpq_mat(nb, 1)
        for r, i in enumerate(tight):
            cols, coefs, rhs, _ = rows[i]
            acc = fq(rhs)
            for j, a in zip(cols, coefs):
                k = pos.get(j)
                if k is None:
                    acc -= a * x[j]
                else:
                    A[r, k] = a
            b[r, 0] = acc
        cb = flint.fmpq_mat(nb, 1, [_fq(cost[j]) for j in basic])
        try:
            xb = A.solve(b)
            y = A.transpose().solve(cb)
        except (ZeroDivisionError, ValueError):
            return None
        for k, j in enumerate(basic):
            x[j] = xb[k, 0]
        for r, i in enumerate(tight):
            ydual[i] = y[r, 0]

    # primal feasibility
    for j in basic:
        if (lo_q[j] is not None and x[j] < lo_q[j]) or (hi_q[j] is not None and x[j] > hi_q[j]):
            return None
    for i, (cols, coefs, rhs, sense) in enumerate(rows):
        if i in row_side:
            continue
        act = fq(0)
        for j, a in zip(cols, coefs):
            act += a * x[j]
        if (sense == "<=" and act > rhs) or (sense == ">=" and act < rhs) or (
            sense == "==" and act != rhs
        ):
            return None
    # dual feasibility: row duals and reduced costs carry the right signs
    for i, side in row_side.items():
        if side * ydual[i] < 0:
            return None
    red = [_fq(c) for c in cost]
    for i, yi in ydual.items():
        if yi != 0:
            cols, coefs, _, _ = rows[i]
            for j, a in zip(cols, coefs):
                red[j] -= a * yi
    for j in range(nv):
        if cstat[j] == BS.kBasic or (lo_q[j] is not None and lo_q[j] == hi_q[j]):
            continue
        d = red[j]
        at_lo = lo_q[j] is not None and x[j] == lo_q[j]
        at_hi = hi_q[j] is not None and x[j] == hi_q[j]
        if (d > 0 and not at_lo) or (d < 0 and not at_hi):
            return None

    x = [_fr(v) for v in x]
    values = {v.name: x[j] for j, v in enumerate(lp.variables)}
    objective = sum((c * values[k] for k, c in lp.objective.items()), Fraction(0))
    iters = int(h.getInfo().simplex_iteration_count)
    return LpSolution(OPTIMAL, objective, values, iters)
