"""Exact linear programming.

A bounded-variable primal simplex over the rationals.  The tableau is kept as
an integer matrix where every row is an equation scaled by an arbitrary
positive factor and reduced by the gcd of its entries, so no fractions are
ever stored in it.  Variable values are tracked as :class:`Fraction`.

Pricing uses Dantzig's largest-coefficient rule and falls back to Bland's
smallest-index rule after a run of degenerate pivots, which rules out
cycling.  ``rule="bland"`` forces Bland's rule throughout.

The default ``method="auto"`` first asks a floating-point simplex (HiGHS)
for an optimal basis and then certifies it in exact arithmetic: the basic
solution and its duals are recomputed over the rationals and checked for
primal and dual feasibility.  A certified basis is an exact optimal vertex.
Anything that fails the certificate is re-solved by the exact simplex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import _basis, _kernels
from .errors import InternalError, InvalidArgument
from .instance import as_fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

SENSES = ("<=", "==", ">=")
_DEGENERATE_RUN = 50


@dataclass(frozen=True)
class Variable:
    name: str
    lo: Fraction | None = Fraction(0)
    hi: Fraction | None = None

    def __post_init__(self):
        if self.lo is not None:
            object.__setattr__(self, "lo", as_fraction(self.lo))
        if self.hi is not None:
            object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise InvalidArgument(f"variable {self.name}: lower bound exceeds upper bound")


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[str, Fraction]
    sense: str
    rhs: Fraction
    name: str | None = None

    def __post_init__(self):
        if self.sense not in SENSES:
            raise InvalidArgument(f"unknown relation {self.sense!r}")
        object.__setattr__(self, "rhs", as_fraction(self.rhs))
        object.__setattr__(
            self, "coeffs", {k: as_fraction(v) for k, v in self.coeffs.items() if v != 0}
        )


@dataclass(frozen=True)
class LinearProgram:
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    objective: Mapping[str, Fraction]
    sense: str = "min"

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(
            self, "objective", {k: as_fraction(v) for k, v in self.objective.items() if v != 0}
        )
        if self.sense not in ("min", "max"):
            raise InvalidArgument(f"objective sense must be 'min' or 'max', got {self.sense!r}")
        index = self.index
        if len(index) != len(self.variables):
            raise InvalidArgument("duplicate variable names")
        for name in self.objective:
            if name not in index:
                raise InvalidArgument(f"objective references undeclared variable {name!r}")
        for con in self.constraints:
            for name in con.coeffs:
                if name not in index:
                    raise InvalidArgument(f"constraint references undeclared variable {name!r}")

    @cached_property
    def index(self) -> dict[str, int]:
        return {v.name: i for i, v in enumerate(self.variables)}

    @cached_property
    def _rows(self):
        """Constraint rows scaled to integers: (col indices, int coeffs, int rhs)."""
        index = self.index
        rows = []
        for con in self.constraints:
            vals = list(con.coeffs.values()) + [con.rhs]
            L = 1
            for x in vals:
                L = L * x.denominator // math.gcd(L, x.denominator)
            cols = [index[k] for k in con.coeffs]
            coefs = [int(v * L) for v in con.coeffs.values()]
            rows.append((cols, coefs, int(con.rhs * L), con.sense))
        return rows

    def _derived(self, **changes) -> "LinearProgram":
        new = object.__new__(LinearProgram)
        for k in ("variables", "constraints", "objective", "sense"):
            object.__setattr__(new, k, changes.get(k, getattr(self, k)))
        object.__setattr__(new, "index", self.index)
        if "constraints" not in changes:
            object.__setattr__(new, "_rows", self._rows)
        return new

    def with_bounds(self, bounds: Mapping[str, tuple]) -> "LinearProgram":
        """Copy with the given ``name -> (lo, hi)`` bound overrides."""
        variables = list(self.variables)
        for name, (lo, hi) in bounds.items():
            try:
                i = self.index[name]
            except KeyError:
                raise InvalidArgument(f"unknown variable {name!r}") from None
            variables[i] = Variable(name, lo, hi)
        return self._derived(variables=tuple(variables))

    def with_constraints(self, extra: Iterable[Constraint]) -> "LinearProgram":
        extra = tuple(extra)
        for con in extra:
            for name in con.coeffs:
                if name not in self.index:
                    raise InvalidArgument(f"constraint references undeclared variable {name!r}")
        return self._derived(constraints=self.constraints + extra)


@dataclass(frozen=True)
class LpSolution:
    status: str
    objective: Fraction | None = None
    assignment: Mapping[str, Fraction] = field(default_factory=dict)
    iterations: int = 0

    def __getitem__(self, name: str) -> Fraction:
        return self.assignment[name]


def add_fixing(lp: LinearProgram, variable: str, value) -> LinearProgram:
    """Return ``lp`` with the equality ``variable == value`` appended."""
    if variable not in lp.index:
        raise InvalidArgument(f"unknown variable {variable!r}")
    value = as_fraction(value)
    var = lp.variables[lp.index[variable]]
    if (var.lo is not None and value < var.lo) or (var.hi is not None and value > var.hi):
        raise InvalidArgument(f"fixing {variable}={value} lies outside its bounds")
    return lp.with_constraints([Constraint({variable: Fraction(1)}, "==", value,
                                           name=f"fix_{variable}")])


def solve_lp(lp: LinearProgram, rule: str = "dantzig", check: bool = True,
             method: str = "auto") -> LpSolution:
    """Solve ``lp`` exactly; infeasible/unbounded are reported as statuses.

    ``method`` is ``"auto"`` (certified floating-point basis, exact simplex
    as fallback) or ``"simplex"`` (exact simplex only).
    """
    if rule not in ("dantzig", "bland"):
        raise InvalidArgument(f"unknown pivot rule {rule!r}")
    if method not in ("auto", "simplex"):
        raise InvalidArgument(f"unknown method {method!r}")
    if method == "auto" and _basis.available():
        sol = _basis.certified_solve(lp)
        if sol is not None:
            if check and check_assignment(lp, sol.assignment):
                raise InternalError("certified basis yields an infeasible point")
            return sol
    return _Simplex(lp, rule).solve(check=check)


def check_assignment(lp: LinearProgram, x: Mapping[str, Fraction]) -> list[str]:
    """List every violated bound or constraint (empty when feasible)."""
    bad = []
    for v in lp.variables:
        val = x[v.name]
        if (v.lo is not None and val < v.lo) or (v.hi is not None and val > v.hi):
            bad.append(f"bound of {v.name}")
    for i, con in enumerate(lp.constraints):
        lhs = sum((c * x[k] for k, c in con.coeffs.items()), Fraction(0))
        ok = lhs <= con.rhs if con.sense == "<=" else lhs >= con.rhs if con.sense == ">=" else lhs == con.rhs
        if not ok:
            bad.append(con.name or f"constraint {i}")
    return bad


class _Simplex:
    def __init__(self, lp: LinearProgram, rule: str):
        self.lp = lp
        self.rule = rule
        self.iterations = 0

    # -- setup -----------------------------------------------------------
    def _build(self) -> bool:
        lp = self.lp
        nv = len(lp.variables)
        lo = [v.lo for v in lp.variables]
        hi = [v.hi for v in lp.variables]
        fixed = [lo[j] is not None and lo[j] == hi[j] for j in range(nv)]
        free_cols = [j for j in range(nv) if not fixed[j]]
        colpos = {j: k for k, j in enumerate(free_cols)}
        ns = len(free_cols)

        rows = []  # (positions, coefs, rhs Fraction, sense)
        for cols, coefs, rhs, sense in lp._rows:
            rhs = Fraction(rhs)
            pos, cf = [], []
            for j, a in zip(cols, coefs):
                if fixed[j]:
                    rhs -= a * lo[j]
                else:
                    pos.append(colpos[j])
                    cf.append(a)
            if not pos:
                if (sense == "<=" and rhs < 0) or (sense == ">=" and rhs > 0) or (
                    sense == "==" and rhs != 0
                ):
                    return False
                continue
            if rhs.denominator != 1:
                cf = [a * rhs.denominator for a in cf]
                rhs = Fraction(rhs.numerator)
            rows.append((pos, cf, rhs, sense))

        m = len(rows)
        x0 = []
        status = []
        for j in free_cols:
            if lo[j] is not None:
                x0.append(lo[j])
            elif hi[j] is not None:
                x0.append(hi[j])
            else:
                x0.append(Fraction(0))
        nslack = sum(1 for r in rows if r[3] != "==")
        # decide the initial basic column of every row
        init = []
        nart = 0
        for pos, cf, rhs, sense in rows:
            resid = rhs - sum((a * x0[p] for p, a in zip(pos, cf)), Fraction(0))
            if sense == "<=" and resid >= 0:
                init.append(("slack", 1, resid))
            elif sense == ">=" and resid <= 0:
                init.append(("slack", -1, -resid))
            else:
                init.append(("art", 1 if resid >= 0 else -1, abs(resid)))
                nart += 1

        ncols = ns + nslack + nart
        zc = ncols
        T = np.zeros((m + 2, ncols + 1), dtype=np.int64)
        big = 0
        for i, (pos, cf, _, _) in enumerate(rows):
            for p, a in zip(pos, cf):
                big = max(big, abs(a))
        if big > 2**40:
            T = T.astype(object)
        x = list(x0) + [Fraction(0)] * (nslack + nart)
        clo = [lo[j] for j in free_cols] + [Fraction(0)] * (nslack + nart)
        chi = [hi[j] for j in free_cols] + [None] * (nslack + nart)
        basis = [0] * m
        is_art = np.zeros(ncols, dtype=bool)
        s_at = ns
        a_at = ns + nslack
        art_rows = []
        for i, ((pos, cf, _, sense), (kind, sgn, val)) in enumerate(zip(rows, init)):
            T[i, pos] = cf
            if sense != "==":
                sc = 1 if sense == "<=" else -1
                T[i, s_at] = sc
                if kind == "slack":
                    basis[i] = s_at
                    x[s_at] = val
                s_at += 1
            if kind == "art":
                T[i, a_at] = sgn
                basis[i] = a_at
                x[a_at] = val
                is_art[a_at] = True
                art_rows.append((i, sgn))
                a_at += 1

        # phase-2 objective row
        L = 1
        obj = [(j, c) for j, c in ((lp.index[k], c) for k, c in lp.objective.items())]
        for _, c in obj:
            L = L * c.denominator // math.gcd(L, c.denominator)
        sgn_obj = 1 if lp.sense == "min" else -1
        for j, c in obj:
            if not fixed[j]:
                T[m, colpos[j]] = sgn_obj * int(c * L)
        T[m, zc] = 1
        # phase-1 objective row: sum of artificials, priced out
        T[m + 1, zc] = 1
        for i, sgn in art_rows:
            T[m + 1, basis[i]] = 1
        for i, sgn in art_rows:
            T[m + 1] -= sgn * T[i]

        self.m, self.ncols, self.zc, self.ns = m, ncols, zc, ns
        self.T = T
        self.x = x
        self.lo, self.hi = clo, chi
        self.basis = basis
        self.is_basic = np.zeros(ncols, dtype=bool)
        self.is_basic[basis] = True
        self.is_art = is_art
        self.free_cols = free_cols
        self.fixed = fixed
        self.lo_full = lo
        self.can_inc = np.array(
            [(chi[j] is None or x[j] < chi[j]) for j in range(ncols)], dtype=bool
        )
        self.can_dec = np.array(
            [(clo[j] is None or x[j] > clo[j]) for j in range(ncols)], dtype=bool
        )
        return True

    # -- iteration -------------------------------------------------------
    def _pivot(self, r: int, q: int) -> None:
        T = self.T
        rows = np.nonzero(T[:, q])[0]
        rows = rows[rows != r]
        self.T = _kernels.pivot_rows(T, r, q, rows)

    def _run(self, obj_row: int, allowed: np.ndarray) -> str:
        m = self.m
        bland = self.rule == "bland"
        streak = 0
        limit = 50 * (m + self.ncols) + 1000
        x, lo, hi, basis = self.x, self.lo, self.hi, self.basis
        while True:
            self.iterations += 1
            if self.iterations > limit:
                raise InternalError("simplex iteration limit exceeded")
            T = self.T
            rc = T[obj_row, : self.ncols]
            nb = allowed & ~self.is_basic
            elig = nb & (((rc < 0) & self.can_inc) | ((rc > 0) & self.can_dec))
            cand = np.flatnonzero(elig)
            if cand.size == 0:
                return OPTIMAL
            if bland:
                q = int(cand[0])
            else:
                mag = np.abs(rc[cand])
                q = int(cand[int(np.argmax(mag))])
            delta = 1 if rc[q] < 0 else -1

            # ratio test
            best = None
            best_row = -1
            if delta > 0 and hi[q] is not None:
                best = hi[q] - x[q]
            elif delta < 0 and lo[q] is not None:
                best = x[q] - lo[q]
            col = T[:m, q]
            support = np.flatnonzero(col)
            rates = {}
            for i in support:
                i = int(i)
                b = basis[i]
                g = Fraction(-delta * int(col[i]), int(T[i, b]))
                rates[i] = g
                if g < 0:
                    if lo[b] is None:
                        continue
                    theta = (x[b] - lo[b]) / -g
                else:
                    if hi[b] is None:
                        continue
                    theta = (hi[b] - x[b]) / g
                if (best is None or theta < best
                        or (theta == best and best_row >= 0 and b < basis[best_row])):
                    best = theta
                    best_row = i
            if best is None:
                return UNBOUNDED

            if best != 0:
                x[q] += delta * best
                for i, g in rates.items():
                    x[basis[i]] += g * best
                streak = 0
            else:
                streak += 1
                if streak >= _DEGENERATE_RUN:
                    bland = True

            if best_row < 0:
                # bound flip of the entering variable
                self._set_bound_status(q)
                continue
            leaving = basis[best_row]
            g = rates[best_row]
            x[leaving] = lo[leaving] if g < 0 else hi[leaving]
            self._pivot(best_row, q)
            basis[best_row] = q
            self.is_basic[q] = True
            self.is_basic[leaving] = False
            self.can_inc[q] = self.can_dec[q] = True
            self._set_bound_status(leaving)

    def _set_bound_status(self, j: int) -> None:
        x, lo, hi = self.x, self.lo, self.hi
        self.can_inc[j] = hi[j] is None or x[j] < hi[j]
        self.can_dec[j] = lo[j] is None or x[j] > lo[j]

    def _drive_out_artificials(self) -> None:
        m = self.m
        usable = ~self.is_art
        for i in range(m):
            b = self.basis[i]
            if not self.is_art[b]:
                continue
            row = self.T[i, : self.ncols]
            cand = np.flatnonzero((row != 0) & usable & ~self.is_basic)
            if cand.size == 0:
                continue  # redundant row; artificial stays basic at zero
            q = int(cand[0])
            self._pivot(i, q)
            self.basis[i] = q
            self.is_basic[q] = True
            self.is_basic[b] = False
            self.can_inc[q] = self.can_dec[q] = True

    # -- driver ----------------------------------------------------------
    def solve(self, check: bool = True) -> LpSolution:
        lp = self.lp
        if not self._build():
            return LpSolution(INFEASIBLE)
        m = self.m
        if self.is_art.any():
            allowed = np.ones(self.ncols, dtype=bool)
            self._run(m + 1, allowed)
            infeas = sum((self.x[j] for j in np.flatnonzero(self.is_art)), Fraction(0))
            if infeas > 0:
                return LpSolution(INFEASIBLE, iterations=self.iterations)
            for j in np.flatnonzero(self.is_art):
                self.hi[j] = Fraction(0)
                self.x[j] = Fraction(0)
                self.can_inc[j] = self.can_dec[j] = False
            self._drive_out_artificials()
        allowed = ~self.is_art
        status = self._run(m, allowed)
        if status == UNBOUNDED:
            return LpSolution(UNBOUNDED, iterations=self.iterations)

        values = {}
        pos = {j: k for k, j in enumerate(self.free_cols)}
        for j, v in enumerate(lp.variables):
            values[v.name] = self.lo_full[j] if self.fixed[j] else self.x[pos[j]]
        objective = sum((c * values[k] for k, c in lp.objective.items()), Fraction(0))
        if check:
            bad = check_assignment(lp, values)
            if bad:
                raise InternalError(f"simplex returned an infeasible point: {bad[:3]}")
        return LpSolution(OPTIMAL, objective, values, self.iterations)
