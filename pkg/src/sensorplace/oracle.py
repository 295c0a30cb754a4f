"""Brute-force ground truth for small instances.

Nothing here shares code with the LP or MILP modules: placements are
enumerated subset by subset and scored with max flow, and min cuts are
found by enumerating every bipartition.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidArgument, TooLargeError
from .flow import _Network, _scale
from .instance import Instance, as_fraction

DEFAULT_CAP = 2 * 10**6
MINCUT_MAX_VERTICES = 20

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class OracleResult:
    """Optimal value, all optimal placements (ascending) and how many sets were scored."""

    value: Fraction | None
    placements: list[frozenset[int]] = field(default_factory=list)
    count: int = 0
    status: str = OPTIMAL


def _check_cap(n_candidates: int, k: int, cap: int) -> int:
    total = math.comb(n_candidates, k)
    if total > cap:
        raise TooLargeError(
            f"C({n_candidates},{k}) = {total} placements exceeds the oracle cap {cap}"
        )
    return total


def _check_roles(inst: Instance) -> None:
    if not inst.sources or not inst.targets:
        raise InvalidArgument("instance needs sources and targets")


def oracle_pc(inst: Instance, k: int, cap: int = DEFAULT_CAP,
              witnesses: bool = True) -> OracleResult:
    """Minimum over all k-subsets of the placeable vertices of the max uncontrolled flow.

    Without ``witnesses`` the scan stops at the first placement of value 0.
    """
    _check_roles(inst)
    P = inst.placeable
    if not 0 <= k <= len(P):
        raise InvalidArgument(f"k={k} must lie in [0, {len(P)}]")
    _check_cap(len(P), k, cap)
    net = _Network(inst)
    best, argmin, count = None, [], 0
    for D in itertools.combinations(P, k):
        count += 1
        val = net.max_value(D)
        if best is None or val < best:
            best, argmin = val, [frozenset(D)]
        elif val == best:
            argmin.append(frozenset(D))
        if best == 0 and not witnesses:
            break
    return OracleResult(best, argmin, count)


def oracle_pq(inst: Instance, q, cap: int = DEFAULT_CAP) -> OracleResult:
    """Smallest ``k`` with some k-subset meeting ``a = (1-q) * max maxflow``.

    ``placements`` lists every k-subset that meets the bound.
    """
    _check_roles(inst)
    q = as_fraction(q)
    if not 0 <= q <= 1:
        raise InvalidArgument(f"quality factor must lie in [0,1], got {q}")
    net = _Network(inst)
    a = (1 - q) * net.max_value(())
    P = inst.placeable
    count = 0
    if net.max_value(P) > a:
        return OracleResult(None, [], 1, INFEASIBLE)
    for k in range(len(P) + 1):
        _check_cap(len(P), k, cap)
        found = []
        for D in itertools.combinations(P, k):
            count += 1
            if net.max_value(D) <= a:
                found.append(frozenset(D))
        if found:
            return OracleResult(Fraction(k), found, count)
    raise AssertionError("unreachable: the full placement meets the bound")


def oracle_mincut(inst: Instance, t: int) -> Fraction:
    """Minimum crossing capacity over every bipartition with S inside and ``t`` outside."""
    _check_roles(inst)
    if t not in inst.targets:
        raise InvalidArgument(f"vertex {t} is not a target")
    if inst.n > MINCUT_MAX_VERTICES:
        raise TooLargeError(
            f"oracle_mincut enumerates 2^(|V|-|S|-1) cuts; |V|={inst.n} exceeds {MINCUT_MAX_VERTICES}"
        )
    free = [v for v in range(inst.n) if v not in inst.sources and v != t]
    L, caps = _scale(inst.capacities)
    masks = np.arange(1 << len(free), dtype=np.int64)
    # inside[v] is a boolean vector over all masks: v on the source side
    ones = np.ones(masks.shape, dtype=bool)
    zeros = np.zeros(masks.shape, dtype=bool)
    inside = {v: ones for v in inst.sources}
    inside[t] = zeros
    for bit, v in enumerate(free):
        inside[v] = (masks >> bit) & 1 == 1
    use_obj = sum(caps) >= 2**62
    total = np.zeros(masks.shape, dtype=object if use_obj else np.int64)
    for (u, v), c in zip(inst.edges, caps):
        if c:
            total += (inside[u] & ~inside[v]) * (c if use_obj else np.int64(c))
    return Fraction(int(total.min()), L)
