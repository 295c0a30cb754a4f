"""PQ and PC cut formulations, exact branch-and-bound, LP-format export.

Variables, for every target ``t``, vertex ``v`` and arc ``(u, v)``:

* ``d_v``        -- sensor at ``v``
* ``a_t_v``      -- ``v`` lies on the source side of the cut for ``t``
* ``cut_t_u_v``  -- arc ``(u, v)`` is an uncontrolled cut arc for ``t``
* ``M``          -- largest cut value (PC only)

Both models share: every source on the source side, the target off it, an
arc counts as cut when its tail is inside, its head outside and neither end
holds a sensor, and no sensor on sources, targets or protected vertices.
PQ minimises ``sum d`` with every cut value at most ``a``; PC minimises
``M`` with exactly ``k`` sensors and every cut value at most ``M``.
"""
from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, replace
from decimal import Decimal
from fractions import Fraction
from typing import Iterable

from .errors import InstanceFormatError, InternalError, InvalidArgument
from .flow import _Network, evaluate_placement
from .instance import Instance, Placement, as_fraction
from .lp import (INFEASIBLE, OPTIMAL, Constraint, LinearProgram, Variable,
                 solve_lp)

PQ = "PQ"
PC = "PC"
TIMEOUT = "timeout"


def d_name(v: int) -> str:
    return f"d_{v}"


def a_name(t: int, v: int) -> str:
    return f"a_{t}_{v}"


def cut_name(t: int, u: int, v: int) -> str:
    return f"cut_{t}_{u}_{v}"


@dataclass(frozen=True)
class Formulation:
    kind: str
    instance: Instance
    lp: LinearProgram
    var_d: dict[int, str]
    var_a: dict[tuple[int, int], str]
    var_cut: dict[tuple[int, tuple[int, int]], str]
    var_M: str | None = None
    bound_a: Fraction | None = None
    k: int | None = None
    q: Fraction | None = None
    relaxed: bool = False

    @property
    def binaries(self) -> tuple[str, ...]:
        """Variables declared 0/1 in the integral model (empty when relaxed)."""
        if self.relaxed:
            return ()
        return (tuple(self.var_d.values()) + tuple(self.var_a.values())
                + tuple(self.var_cut.values()))

    def cut_values(self, x) -> dict[int, Fraction]:
        """Per-target weighted cut value of an assignment."""
        inst = self.instance
        out = {}
        for t in sorted(inst.targets):
            out[t] = sum(
                (x[self.var_cut[t, e]] * c for e, c in zip(inst.edges, inst.capacities)),
                Fraction(0),
            )
        return out


def _common(inst: Instance):
    if not inst.sources or not inst.targets:
        raise InvalidArgument("formulations need nonempty source and target sets")
    V = range(inst.n)
    T = sorted(inst.targets)
    S = sorted(inst.sources)
    var_d = {v: d_name(v) for v in V}
    var_a = {(t, v): a_name(t, v) for t in T for v in V}
    var_cut = {(t, e): cut_name(t, *e) for t in T for e in inst.edges}
    variables = [Variable(n, 0, 1) for n in var_d.values()]
    variables += [Variable(n, 0, 1) for n in var_a.values()]
    variables += [Variable(n, 0, 1) for n in var_cut.values()]
    cons = []
    one = Fraction(1)
    for t in T:
        for s in S:
            cons.append(Constraint({var_a[t, s]: one}, "==", 1, name=f"src_in_{t}_{s}"))
        cons.append(Constraint({var_a[t, t]: one}, "==", 0, name=f"tgt_out_{t}"))
    for t in T:
        for (u, v) in inst.edges:
            cons.append(Constraint(
                {var_cut[t, (u, v)]: one, var_a[t, u]: -one, var_a[t, v]: one,
                 var_d[u]: one, var_d[v]: one},
                ">=", 0, name=f"link_{t}_{u}_{v}",
            ))
    for s in S:
        cons.append(Constraint({var_d[s]: one}, "==", 0, name=f"nosens_src_{s}"))
    for t in T:
        cons.append(Constraint({var_d[t]: one}, "==", 0, name=f"nosens_tgt_{t}"))
    extra = set(inst.no_sensor)
    if inst.super_source is not None:
        extra.add(inst.super_source)
    for v in sorted(extra - set(S) - set(T)):
        cons.append(Constraint({var_d[v]: one}, "==", 0, name=f"nosens_{v}"))
    # the super source is itself a source, so its fixing already appears above
    return var_d, var_a, var_cut, variables, cons


def _cut_terms(inst: Instance, var_cut, t) -> dict[str, Fraction]:
    return {var_cut[t, e]: c for e, c in zip(inst.edges, inst.capacities) if c != 0}


def build_pq(inst: Instance, q) -> Formulation:
    """Minimise the sensor count subject to every cut being at most ``(1-q) * max maxflow``."""
    q = as_fraction(q)
    if not 0 <= q <= 1:
        raise InvalidArgument(f"quality factor must lie in [0,1], got {q}")
    var_d, var_a, var_cut, variables, cons = _common(inst)
    bound = (1 - q) * evaluate_placement(inst, ())
    for t in sorted(inst.targets):
        cons.append(Constraint(_cut_terms(inst, var_cut, t), "<=", bound, name=f"flow_bound_{t}"))
    lp = LinearProgram(tuple(variables), tuple(cons), {n: 1 for n in var_d.values()}, "min")
    return Formulation(PQ, inst, lp, var_d, var_a, var_cut, bound_a=bound, q=q)


def build_pc(inst: Instance, k: int) -> Formulation:
    """Minimise the largest cut ``M`` using exactly ``k`` sensors."""
    if k < 0 or k > len(inst.placeable):
        raise InvalidArgument(
            f"k={k} must lie in [0, {len(inst.placeable)}] (placeable vertices)"
        )
    var_d, var_a, var_cut, variables, cons = _common(inst)
    variables.append(Variable("M", 0, None))
    cons.append(Constraint({n: 1 for n in var_d.values()}, "==", k, name="budget"))
    for t in sorted(inst.targets):
        terms = _cut_terms(inst, var_cut, t)
        terms["M"] = Fraction(-1)
        cons.append(Constraint(terms, "<=", 0, name=f"cut_le_M_{t}"))
    lp = LinearProgram(tuple(variables), tuple(cons), {"M": 1}, "min")
    return Formulation(PC, inst, lp, var_d, var_a, var_cut, var_M="M", k=k)


def relax(f: Formulation) -> Formulation:
    """Continuous version: every 0/1 variable ranges over ``[0, 1]``."""
    return replace(f, relaxed=True)


# -- exact solving ------------------------------------------------------------

@dataclass(frozen=True)
class ExactResult:
    status: str
    placement: Placement | None
    objective: Fraction | None
    nodes: int = 0
    lp_solves: int = 0
    seconds: float = 0.0

    def __iter__(self):
        yield self.placement
        yield self.objective


class _BranchAndBound:
    def __init__(self, f: Formulation, time_limit: float | None, node_limit: int | None):
        self.f = f
        self.inst = f.instance
        self.net = _Network(self.inst)
        self.P = list(self.inst.placeable)
        self.time_limit = time_limit
        self.node_limit = node_limit
        self.best_D: frozenset[int] | None = None
        self.best_val: Fraction | None = None
        self.nodes = 0
        self.lp_solves = 0
        self.start = time.perf_counter()
        self.grid = self.net.scale  # PC values are multiples of 1/grid

    # objective of an integral placement
    def _value(self, D) -> Fraction:
        return self.net.max_value(D)

    def _objective(self, D) -> Fraction | None:
        if self.f.kind == PC:
            return self._value(D)
        return Fraction(len(D)) if self._value(D) <= self.f.bound_a else None

    def _offer(self, D: frozenset[int]) -> None:
        obj = self._objective(D)
        if obj is None:
            return
        if self.best_val is None or obj < self.best_val or (
            obj == self.best_val and sorted(D) < sorted(self.best_D)
        ):
            self.best_val, self.best_D = obj, D

    def _prunable(self, bound: Fraction) -> bool:
        if self.best_val is None:
            return False
        if self.f.kind == PQ:
            return math.ceil(bound) >= self.best_val
        return Fraction(math.ceil(bound * self.grid), self.grid) >= self.best_val

    def _round(self, d: dict[int, Fraction], fix1: frozenset[int]) -> None:
        order = sorted(self.P, key=lambda v: (-d[v], v))
        if self.f.kind == PC:
            self._offer(frozenset(order[: self.f.k]))
            return
        D = []
        for v in order:
            if self._value(D) <= self.f.bound_a:
                break
            D.append(v)
        self._offer(frozenset(D) | fix1)

    def _out_of_time(self) -> bool:
        if self.node_limit is not None and self.nodes >= self.node_limit:
            return True
        return (self.time_limit is not None
                and time.perf_counter() - self.start > self.time_limit)

    def run(self) -> ExactResult:
        f, P = self.f, self.P
        if f.kind == PQ and self._value(P) > f.bound_a:
            return self._result(INFEASIBLE)
        stack = [(frozenset(), frozenset())]
        timed_out = False
        while stack:
            if self._out_of_time():
                timed_out = True
                break
            fix1, fix0 = stack.pop()
            self.nodes += 1
            free = [v for v in P if v not in fix1 and v not in fix0]
            if f.kind == PC:
                if len(fix1) > f.k or len(fix1) + len(free) < f.k:
                    continue
                # sensors on every remaining candidate bound any completion from below
                if self._prunable(self._value(fix1.union(free))):
                    continue
            else:
                if self.best_val is not None and len(fix1) >= self.best_val:
                    continue
                if self._value(fix1.union(free)) > f.bound_a:
                    continue
            bounds = {f.var_d[v]: (1, 1) for v in fix1}
            bounds.update({f.var_d[v]: (0, 0) for v in fix0})
            sol = solve_lp(f.lp.with_bounds(bounds), check=False)
            self.lp_solves += 1
            if sol.status != OPTIMAL:
                continue
            if self._prunable(sol.objective):
                continue
            d = {v: sol.assignment[f.var_d[v]] for v in P}
            frac = [v for v in P if d[v].denominator != 1]
            if not frac:
                D = frozenset(v for v in P if d[v] == 1)
                obj = self._objective(D)
                if obj is None or obj != sol.objective:
                    raise InternalError(
                        f"integral LP point disagrees with flow evaluation: {sol.objective} vs {obj}"
                    )
                self._offer(D)
                continue
            self._round(d, fix1)
            if self._prunable(sol.objective):
                continue
            v = min(frac, key=lambda j: (abs(d[j] - Fraction(1, 2)), j))
            stack.append((fix1, fix0 | {v}))
            stack.append((fix1 | {v}, fix0))
        if timed_out:
            return self._result(TIMEOUT)
        if self.best_val is None:
            return self._result(INFEASIBLE)
        return self._result(OPTIMAL)

    def _result(self, status: str) -> ExactResult:
        pl = None
        if self.best_D is not None:
            pl = Placement(self.best_D, self._value(self.best_D))
        return ExactResult(status, pl, self.best_val, self.nodes, self.lp_solves,
                           time.perf_counter() - self.start)


def solve_exact(f: Formulation, time_limit: float | None = None,
                node_limit: int | None = None) -> ExactResult:
    """Globally optimal placement by LP-based branch-and-bound on the sensor variables.

    Once every ``d`` is integral the remaining cut variables can always be
    completed to a 0/1 point of equal value (the per-target cut system is
    totally unimodular), so branching on ``d`` alone is exact.  The returned
    placement carries its flow-engine value; for PC that value is the
    objective.
    """
    if f.relaxed:
        raise InvalidArgument("solve_exact needs an integral formulation")
    return _BranchAndBound(f, time_limit, node_limit).run()


def integral_point(f: Formulation, D: Iterable[int]) -> dict[str, Fraction]:
    """Complete a placement to a 0/1 point of the formulation via min cuts."""
    from .flow import apply_placement, maxflow

    inst = f.instance
    D = frozenset(D)
    g = apply_placement(inst, D)
    x: dict[str, Fraction] = {name: Fraction(0) for name in f.lp.index}
    for v in D:
        x[f.var_d[v]] = Fraction(1)
    worst = Fraction(0)
    for t in sorted(inst.targets):
        A = maxflow(g, t).min_cut_side
        val = Fraction(0)
        for v in A:
            x[f.var_a[t, v]] = Fraction(1)
        for (u, v), c in zip(inst.edges, inst.capacities):
            if u in A and v not in A and u not in D and v not in D:
                x[f.var_cut[t, (u, v)]] = Fraction(1)
                val += c
        worst = max(worst, val)
    if f.var_M is not None:
        x[f.var_M] = worst
    return x


# -- LP-format export -----------------------------------------------------------

def _num(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den == 1:
        return format(Decimal(x.numerator) / Decimal(x.denominator), "f")
    return repr(float(x))


def _expr(coeffs) -> str:
    parts = []
    for name, c in coeffs.items():
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = name if mag == 1 else f"{_num(mag)} {name}"
        parts.append(f"{sign} {term}")
    if not parts:
        return "0"
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else s


def format_lp(f: Formulation) -> str:
    """CPLEX LP text: one line per constraint and one per variable declaration."""
    lp = f.lp
    lines = [f"\\ {f.kind} sensor placement, {'relaxed' if f.relaxed else 'integral'}"]
    lines.append("Minimize" if lp.sense == "min" else "Maximize")
    lines.append(f" obj: {_expr(lp.objective)}")
    lines.append("Subject To")
    ops = {"<=": "<=", ">=": ">=", "==": "="}
    for i, con in enumerate(lp.constraints):
        lines.append(f" {con.name or f'c{i}'}: {_expr(con.coeffs)} {ops[con.sense]} {_num(con.rhs)}")
    binaries = set(f.binaries)
    lines.append("Bounds")
    for v in lp.variables:
        if v.name in binaries:
            continue
        if v.lo is None and v.hi is None:
            lines.append(f" {v.name} free")
        elif v.hi is None:
            lines.append(f" {v.name} >= {_num(v.lo)}")
        elif v.lo is None:
            lines.append(f" -inf <= {v.name} <= {_num(v.hi)}")
        else:
            lines.append(f" {_num(v.lo)} <= {v.name} <= {_num(v.hi)}")
    lines.append("Binaries")
    for v in lp.variables:
        if v.name in binaries:
            lines.append(f" {v.name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(f: Formulation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_lp(f))


_TERM = re.compile(r"([+-])\s*(?:([0-9.eE+-]+)\s+)?([A-Za-z_][A-Za-z0-9_]*)")


def _parse_expr(text: str, lineno: int) -> dict[str, Fraction]:
    text = text.strip()
    if text == "0":
        return {}
    if not text.startswith(("+", "-")):
        text = "+ " + text
    coeffs = {}
    pos = 0
    for m in _TERM.finditer(text):
        if text[pos:m.start()].strip():
            raise InstanceFormatError(f"cannot parse expression {text!r}", lineno)
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        coeffs[m.group(3)] = -c if m.group(1) == "-" else c
        pos = m.end()
    if text[pos:].strip():
        raise InstanceFormatError(f"cannot parse expression {text!r}", lineno)
    return coeffs


def parse_lp(text: str) -> tuple[LinearProgram, tuple[str, ...]]:
    """Read LP text written by :func:`format_lp`; returns the LP and its binaries."""
    section = None
    sense = "min"
    objective: dict[str, Fraction] = {}
    cons = []
    bounds: dict[str, tuple] = {}
    binaries: list[str] = []
    order: list[str] = []

    def see(name):
        if name not in bounds:
            bounds[name] = (Fraction(0), None)
            order.append(name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low in ("minimize", "maximize"):
            section, sense = "obj", ("min" if low == "minimize" else "max")
            continue
        if low == "subject to":
            section = "st"
            continue
        if low in ("bounds", "binaries", "end"):
            section = low
            continue
        if section == "obj":
            objective = _parse_expr(line.split(":", 1)[1], lineno)
            for n in objective:
                see(n)
        elif section == "st":
            name, body = line.split(":", 1)
            m = re.match(r"(.*?)(<=|>=|=)\s*(\S+)$", body.strip())
            if not m:
                raise InstanceFormatError("malformed constraint", lineno)
            coeffs = _parse_expr(m.group(1), lineno)
            for n in coeffs:
                see(n)
            rel = {"=": "==", "<=": "<=", ">=": ">="}[m.group(2)]
            cons.append(Constraint(coeffs, rel, Fraction(m.group(3)), name=name.strip()))
        elif section == "bounds":
            toks = line.split()
            if len(toks) == 2 and toks[1] == "free":
                see(toks[0])
                bounds[toks[0]] = (None, None)
            elif len(toks) == 3 and toks[1] == ">=":
                see(toks[0])
                bounds[toks[0]] = (Fraction(toks[2]), None)
            elif len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
                see(toks[2])
                lo = None if toks[0] == "-inf" else Fraction(toks[0])
                bounds[toks[2]] = (lo, Fraction(toks[4]))
            else:
                raise InstanceFormatError("malformed bound", lineno)
        elif section == "binaries":
            for n in line.split():
                see(n)
                bounds[n] = (Fraction(0), Fraction(1))
                binaries.append(n)
        else:
            raise InstanceFormatError(f"unexpected line {line!r}", lineno)
    variables = tuple(Variable(n, *bounds[n]) for n in order)
    return LinearProgram(variables, tuple(cons), objective, sense), tuple(binaries)


def read_lp(path) -> tuple[LinearProgram, tuple[str, ...]]:
    with open(path, encoding="utf-8") as fh:
        return parse_lp(fh.read())
