"""Iterative LP-rounding heuristics.

Both heuristics repeatedly solve the relaxed model, collect the tie set
``L`` of not yet chosen vertices whose sensor value equals the current
maximum (and is nonzero), pick one of them uniformly at random, fix its
sensor variable to 1 and solve again.  Randomness comes from one substream
per iteration derived from the caller's seed, so a run is reproducible
from ``(instance, parameter, seed)`` alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InfeasibleError, InternalError
from .flow import evaluate_placement
from .instance import Instance, Placement, as_fraction, make_rng
from .lp import OPTIMAL, LinearProgram, add_fixing, solve_lp
from .milp import PC, PQ, build_pc, build_pq, relax


@dataclass(frozen=True)
class Iteration:
    lp_objective: Fraction
    ties: tuple[int, ...]
    chosen: int


@dataclass
class HeuristicTrace:
    """Per-iteration record of a heuristic run.

    ``objective`` is ``|D|`` for PQ and the flow-engine value of ``D`` for
    PC.  For PC the final relaxed objective with all ``k`` fixings is kept
    separately in ``lp_M``; the two agree whenever the final LP point is
    integral.
    """

    kind: str
    param: Fraction
    seed: int
    iterations: list[Iteration] = field(default_factory=list)
    placement: Placement | None = None
    objective: Fraction | None = None
    lp_M: Fraction | None = None
    bound_a: Fraction | None = None

    def log_lines(self) -> list[str]:
        head = f"# {self.kind} param={self.param} seed={self.seed}"
        if self.bound_a is not None:
            head += f" a={self.bound_a}"
        out = [head]
        for i, it in enumerate(self.iterations, start=1):
            ties = " ".join(map(str, it.ties))
            out.append(f"iter {i} lp={it.lp_objective} L=[{ties}] v_max={it.chosen}")
        D = " ".join(map(str, sorted(self.placement.sensors))) if self.placement else ""
        tail = f"result D=[{D}] objective={self.objective} value={self.placement.value}"
        if self.lp_M is not None:
            tail += f" lp_M={self.lp_M}"
        out.append(tail)
        return out

    def to_log(self) -> str:
        return "\n".join(self.log_lines()) + "\n"


def _tie_set(sol, var_d: dict[int, str], candidates, chosen: set[int]) -> list[int]:
    vals = {v: sol[var_d[v]] for v in range(len(var_d)) if v not in chosen}
    if not vals:
        return []
    top = max(vals.values())
    if top == 0:
        return []
    return [v for v in candidates if v not in chosen and vals[v] == top]


def _solve(lp: LinearProgram, what: str):
    sol = solve_lp(lp)
    if sol.status != OPTIMAL:
        raise InternalError(f"{what} relaxation is {sol.status}")
    return sol


def pq_iterative_best_sensor(inst: Instance, q, seed: int) -> HeuristicTrace:
    """Greedy LP rounding for the quality-constrained problem.

    The loop keeps fixing sensors until the integral placement chosen so
    far meets the flow bound ``a`` on every target.
    """
    q = as_fraction(q)
    f = relax(build_pq(inst, q))
    a = f.bound_a
    trace = HeuristicTrace(PQ, q, seed, bound_a=a)
    placeable = inst.placeable
    if evaluate_placement(inst, placeable) > a:
        raise InfeasibleError(f"no placement reaches flow bound {a}")
    lp = f.lp
    D: list[int] = []
    i = 0
    while evaluate_placement(inst, D) > a:
        i += 1
        sol = _solve(lp, "PQ")
        L = _tie_set(sol, f.var_d, placeable, set(D))
        if not L:
            raise InternalError("relaxation offers no fractional sensor to fix")
        v = make_rng(seed, "pq", i).choice(L)
        trace.iterations.append(Iteration(sol.objective, tuple(L), v))
        D.append(v)
        lp = add_fixing(lp, f.var_d[v], 1)
    value = evaluate_placement(inst, D)
    trace.placement = Placement(frozenset(D), value)
    trace.objective = Fraction(len(D))
    return trace


def pc_iterative_best_sensor(inst: Instance, k: int, seed: int) -> HeuristicTrace:
    """Greedy LP rounding for the cardinality-constrained problem (k fixings)."""
    f = relax(build_pc(inst, k))
    trace = HeuristicTrace(PC, Fraction(k), seed)
    lp = f.lp
    D: list[int] = []
    for i in range(1, k + 1):
        sol = _solve(lp, "PC")
        L = _tie_set(sol, f.var_d, inst.placeable, set(D))
        if not L:
            raise InternalError("relaxation offers no fractional sensor to fix")
        v = make_rng(seed, "pc", i).choice(L)
        trace.iterations.append(Iteration(sol.objective, tuple(L), v))
        D.append(v)
        lp = add_fixing(lp, f.var_d[v], 1)
    trace.lp_M = _solve(lp, "PC").objective
    value = evaluate_placement(inst, D)
    trace.placement = Placement(frozenset(D), value)
    trace.objective = value
    return trace
