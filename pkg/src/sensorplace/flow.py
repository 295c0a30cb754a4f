"""Attack flows, minimum cuts and placement evaluation.

Max flow from the source set runs on an internal super vertex with arcs of
capacity ``sum(c) + 1`` to every source.  Capacities are scaled to integers
by the lcm of their denominators so the kernels work on exact integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import _kernels
from .errors import InvalidArgument
from .instance import Edge, Instance, Placement, check_placement


@dataclass(frozen=True)
class FlowResult:
    target: int
    value: Fraction
    edge_flows: dict[Edge, Fraction]
    min_cut_side: frozenset[int]

    def cut_capacity(self, inst: Instance) -> Fraction:
        A = self.min_cut_side
        return sum(
            (c for (u, v), c in zip(inst.edges, inst.capacities) if u in A and v not in A),
            Fraction(0),
        )


def _scale(caps) -> tuple[int, list[int]]:
    L = 1
    for c in caps:
        L = L * c.denominator // math.gcd(L, c.denominator)
    return L, [int(c * L) for c in caps]


class _Network:
    """Integer-scaled arc arrays of an instance, reused across evaluations."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.tails = [u for u, _ in inst.edges]
        self.heads = [v for _, v in inst.edges]
        self.scale, self.caps = _scale(inst.capacities)
        self.incident: list[list[int]] = [[] for _ in range(inst.n)]
        for i, (u, v) in enumerate(inst.edges):
            self.incident[u].append(i)
            self.incident[v].append(i)
        self.sources = sorted(inst.sources)

    def caps_without(self, D: Iterable[int]) -> list[int]:
        caps = self.caps
        if not D:
            return caps
        caps = list(caps)
        for v in D:
            for i in self.incident[v]:
                caps[i] = 0
        return caps

    def value(self, t: int, caps: list[int]) -> int:
        val, _, _ = _kernels.maxflow_int(
            self.inst.n, self.tails, self.heads, caps, self.sources, t
        )
        return val

    def max_value(self, D: Iterable[int] = ()) -> Fraction:
        caps = self.caps_without(D)
        best = max(self.value(t, caps) for t in sorted(self.inst.targets))
        return Fraction(best, self.scale)


def _check_target(inst: Instance, t: int) -> None:
    if t not in inst.targets:
        raise InvalidArgument(f"vertex {t} is not a target")
    if not inst.sources:
        raise InvalidArgument("instance has no sources")


def maxflow(inst: Instance, t: int) -> FlowResult:
    """Maximum flow from the source set to target ``t`` with a min-cut certificate."""
    _check_target(inst, t)
    net = _Network(inst)
    val, flows, reach = _kernels.maxflow_int(inst.n, net.tails, net.heads, net.caps, net.sources, t)
    L = net.scale
    return FlowResult(
        target=t,
        value=Fraction(val, L),
        edge_flows={e: Fraction(f, L) for e, f in zip(inst.edges, flows)},
        min_cut_side=frozenset(v for v in range(inst.n) if reach[v]),
    )


def maxflow_value(inst: Instance, t: int) -> Fraction:
    _check_target(inst, t)
    net = _Network(inst)
    return Fraction(net.value(t, net.caps), net.scale)


def max_attack_flow(inst: Instance) -> Fraction:
    """``max_t maxflow(S, t)`` over all targets of the unmodified network."""
    return evaluate_placement(inst, ())


def apply_placement(inst: Instance, D) -> Instance:
    """``G minus D``: zero capacity on every arc incident to a sensor."""
    sensors = check_placement(inst, D.sensors if isinstance(D, Placement) else D)
    if not sensors:
        return inst
    caps = [
        Fraction(0) if (u in sensors or v in sensors) else c
        for (u, v), c in zip(inst.edges, inst.capacities)
    ]
    return inst.with_capacities(caps)


def evaluate_placement(inst: Instance, D) -> Fraction:
    """Maximum uncontrolled flow ``max_t maxflow_{G minus D}(S, t)``."""
    sensors = check_placement(inst, D.sensors if isinstance(D, Placement) else D)
    if not inst.targets:
        raise InvalidArgument("instance has no targets")
    if not inst.sources:
        raise InvalidArgument("instance has no sources")
    return _Network(inst).max_value(sensors)


def evaluated(inst: Instance, D) -> Placement:
    sensors = D.sensors if isinstance(D, Placement) else D
    return Placement(frozenset(sensors), evaluate_placement(inst, sensors))


def min_vertex_separator(inst: Instance) -> int | None:
    """Fewest placeable vertices whose removal stops all flow from S to T.

    Arcs of capacity zero carry nothing and are ignored.  Returns ``None``
    when no placement at all can separate (some positive-capacity path
    avoids every placeable vertex, e.g. a direct source-target arc).
    Unit vertex capacities on a split graph; the answer is its max flow.
    """
    if not inst.sources or not inst.targets:
        raise InvalidArgument("instance needs sources and targets")
    n = inst.n
    inf = n + 1
    placeable = set(inst.placeable)
    tails, heads, caps = [], [], []
    for v in range(n):
        tails.append(2 * v)
        heads.append(2 * v + 1)
        caps.append(1 if v in placeable else inf)
    for (u, v), c in zip(inst.edges, inst.capacities):
        if c > 0:
            tails.append(2 * u + 1)
            heads.append(2 * v)
            caps.append(inf)
    sink = 2 * n
    for t in sorted(inst.targets):
        tails.append(2 * t + 1)
        heads.append(sink)
        caps.append(inf)
    val, _, _ = _kernels.maxflow_int(2 * n + 1, tails, heads, caps,
                                     [2 * s for s in sorted(inst.sources)], sink)
    return None if val >= inf else val
