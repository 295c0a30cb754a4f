"""Network instances, sensor placements and instance generators.

An :class:`Instance` is a directed capacitated graph on vertices ``0..n-1``
with a source set, a target set and an optional per-vertex risk map.  All
capacities are exact :class:`~fractions.Fraction` values.  Instances are
immutable; every generator returns a new one.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InvalidArgument, ValidationError

Edge = tuple[int, int]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # floats are taken at face value (shortest repr), not binary expansion
        return Fraction(repr(x))
    return Fraction(x)


def derive_seed(seed: int, *keys) -> int:
    """Derive an independent 64-bit seed from ``seed`` and a key path."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed)).encode())
    for k in keys:
        h.update(b"/")
        h.update(str(k).encode())
    return int.from_bytes(h.digest(), "big")


def make_rng(seed: int, *keys) -> random.Random:
    if not 0 <= int(seed) < 2**64:
        raise InvalidArgument(f"seed must be a 64-bit unsigned integer, got {seed}")
    return random.Random(derive_seed(seed, *keys) if keys else int(seed))


@dataclass(frozen=True)
class Instance:
    """Directed capacitated network with sources ``S`` and targets ``T``.

    ``capacities`` is aligned with ``edges``.  ``super_source`` marks an
    artificial vertex added by :func:`add_super_source`; it and every vertex
    in ``no_sensor`` are excluded from sensor placement in addition to
    ``S`` and ``T``.
    """

    n: int
    edges: tuple[Edge, ...]
    capacities: tuple[Fraction, ...]
    sources: frozenset[int] = frozenset()
    targets: frozenset[int] = frozenset()
    risk: Mapping[int, Fraction] | None = None
    super_source: int | None = None
    no_sensor: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "capacities", tuple(as_fraction(c) for c in self.capacities))
        object.__setattr__(self, "sources", frozenset(int(s) for s in self.sources))
        object.__setattr__(self, "targets", frozenset(int(t) for t in self.targets))
        object.__setattr__(self, "no_sensor", frozenset(int(v) for v in self.no_sensor))
        if self.risk is not None:
            object.__setattr__(
                self, "risk", {int(v): as_fraction(r) for v, r in sorted(self.risk.items())}
            )
        self.validate()

    def validate(self) -> None:
        n = self.n
        if n < 0:
            raise ValidationError("vertex count must be nonnegative")
        if len(self.edges) != len(self.capacities):
            raise ValidationError("edges and capacities differ in length")
        seen = set()
        for (u, v), c in zip(self.edges, self.capacities):
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u},{v}) references an unknown vertex")
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if (u, v) in seen:
                raise ValidationError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            if c < 0:
                raise ValidationError(f"negative capacity on edge ({u},{v})")
        for name, vs in (("source", self.sources), ("target", self.targets),
                         ("no_sensor", self.no_sensor)):
            for v in vs:
                if not 0 <= v < n:
                    raise ValidationError(f"{name} {v} is not a vertex")
        if self.sources & self.targets:
            raise ValidationError(
                f"sources and targets overlap: {sorted(self.sources & self.targets)}"
            )
        if self.super_source is not None:
            if not 0 <= self.super_source < n:
                raise ValidationError("super source is not a vertex")
            if self.super_source not in self.sources:
                raise ValidationError("super source must be a source")
        if self.risk is not None:
            for v, r in self.risk.items():
                if not 0 <= v < n:
                    raise ValidationError(f"risk given for unknown vertex {v}")
                if not 0 <= r <= 1:
                    raise ValidationError(f"risk of vertex {v} outside [0,1]")
            missing = [v for v in range(n) if v not in self.targets and v not in self.risk]
            if missing:
                raise ValidationError(f"risk undefined on non-target vertices {missing[:5]}")

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def capacity(self) -> dict[Edge, Fraction]:
        return dict(zip(self.edges, self.capacities))

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def placeable(self) -> tuple[int, ...]:
        """Vertices that may hold a sensor, ascending."""
        banned = self.sources | self.targets | self.no_sensor
        if self.super_source is not None:
            banned = banned | {self.super_source}
        return tuple(v for v in range(self.n) if v not in banned)

    def out_capacity(self, v: int) -> Fraction:
        return sum((c for (u, _), c in zip(self.edges, self.capacities) if u == v), Fraction(0))

    def replace(self, **changes) -> "Instance":
        fields = dict(
            n=self.n, edges=self.edges, capacities=self.capacities, sources=self.sources,
            targets=self.targets, risk=self.risk, super_source=self.super_source,
            no_sensor=self.no_sensor,
        )
        fields.update(changes)
        return Instance(**fields)

    def with_capacities(self, caps: Sequence) -> "Instance":
        return self.replace(capacities=tuple(caps))


@dataclass(frozen=True)
class Placement:
    """A sensor set ``D`` and, once evaluated, its max uncontrolled flow."""

    sensors: frozenset[int] = field(default_factory=frozenset)
    value: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "sensors", frozenset(int(v) for v in self.sensors))
        if self.value is not None:
            object.__setattr__(self, "value", as_fraction(self.value))

    def __len__(self) -> int:
        return len(self.sensors)

    def __iter__(self):
        return iter(sorted(self.sensors))


def check_placement(inst: Instance, sensors: Iterable[int]) -> frozenset[int]:
    """Return ``sensors`` as a frozenset, raising if any vertex is not placeable."""
    D = frozenset(int(v) for v in sensors)
    bad = sorted(v for v in D if not 0 <= v < inst.n)
    if bad:
        raise InvalidArgument(f"sensor vertices {bad} are not vertices of the instance")
    if D & (inst.sources | inst.targets):
        raise InvalidArgument(
            f"sensors may not sit on sources or targets: {sorted(D & (inst.sources | inst.targets))}"
        )
    if D & inst.no_sensor or (inst.super_source is not None and inst.super_source in D):
        raise InvalidArgument("sensors may not sit on the super source or protected vertices")
    return D


# -- generators ---------------------------------------------------------------

def make_grid(side: int) -> Instance:
    """Square grid, row-major numbering, one arc each way between neighbours."""
    if side < 2:
        raise InvalidArgument(f"grid side must be at least 2, got {side}")
    edges = []
    for r in range(side):
        for c in range(side):
            v = r * side + c
            if c + 1 < side:
                edges += [(v, v + 1), (v + 1, v)]
            if r + 1 < side:
                edges += [(v, v + side), (v + side, v)]
    return Instance(side * side, tuple(edges), (Fraction(1),) * len(edges))


def randomize_capacities(inst: Instance, lo, hi, seed: int, integral: bool = True) -> Instance:
    """Draw every capacity independently and uniformly from ``[lo, hi]``.

    With ``integral`` (the default) capacities are integers in the range;
    otherwise they are rationals on a 1e-6 lattice of the range.
    """
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        raise InvalidArgument(f"empty capacity range [{lo}, {hi}]")
    if lo < 0:
        raise InvalidArgument("capacities must be nonnegative")
    rng = make_rng(seed, "capacities")
    if integral:
        a, b = -((-lo.numerator) // lo.denominator), hi.numerator // hi.denominator
        if a > b:
            raise InvalidArgument(f"no integer in [{lo}, {hi}]")
        caps = [Fraction(rng.randint(a, b)) for _ in inst.edges]
    else:
        steps = 10**6
        caps = [lo + (hi - lo) * Fraction(rng.randint(0, steps), steps) for _ in inst.edges]
    return inst.with_capacities(caps)


def sample_roles(inst: Instance, n_targets: int, n_sources: int, seed: int) -> Instance:
    """Draw ``T`` uniformly from V, then ``S`` uniformly from V minus T."""
    if n_targets < 0 or n_sources < 0 or n_targets + n_sources > inst.n:
        raise InvalidArgument(
            f"cannot draw {n_targets} targets and {n_sources} sources from {inst.n} vertices"
        )
    rng = make_rng(seed, "roles")
    T = rng.sample(range(inst.n), n_targets)
    rest = [v for v in range(inst.n) if v not in set(T)]
    S = rng.sample(rest, n_sources)
    return inst.replace(sources=frozenset(S), targets=frozenset(T), risk=None)


def with_uniform_risk(inst: Instance, r) -> Instance:
    r = as_fraction(r)
    return inst.replace(risk={v: r for v in range(inst.n) if v not in inst.targets})


def add_super_source(inst: Instance, protect_sources: bool = True) -> Instance:
    """Replace the source set by one artificial vertex fed in proportion to risk.

    The new vertex gets an arc to every non-target ``v`` with capacity
    ``risk[v]`` times the total out-capacity of ``v``.  It becomes the only
    source and may never hold a sensor.  With ``protect_sources`` the former
    explicit sources stay sensor-free, so an instance whose sources have no
    incoming arcs keeps its optimum under the indicator risk of its sources.
    """
    if inst.risk is None:
        raise InvalidArgument("add_super_source needs a risk map")
    ss = inst.n
    out = [Fraction(0)] * inst.n
    for (u, _), c in zip(inst.edges, inst.capacities):
        out[u] += c
    new_edges = list(inst.edges)
    new_caps = list(inst.capacities)
    for v in range(inst.n):
        if v in inst.targets:
            continue
        new_edges.append((ss, v))
        new_caps.append(inst.risk[v] * out[v])
    no_sensor = inst.no_sensor | (inst.sources if protect_sources else frozenset())
    return Instance(
        inst.n + 1, tuple(new_edges), tuple(new_caps), sources=frozenset({ss}),
        targets=inst.targets, risk=None, super_source=ss, no_sensor=no_sensor,
    )


def cmfnip_gadget(g: Instance, k: int) -> Instance:
    """Vertex-interdiction gadget encoding arc interdiction with budget ``k``.

    Every vertex gets ``k+1`` copies; every arc ``e=(u,v)`` becomes the path
    ``u_i -> e_u -> e_v -> v_j`` whose middle arc keeps ``c(e)``.  A new
    source feeds all copies of ``s`` and all copies of ``t`` drain into a new
    target.  Non-arc capacities equal the total arc capacity.

    Numbering: copy ``i`` of ``v`` is ``v*(k+1)+i``; arc ``j`` maps to
    ``N+2j`` (tail side) and ``N+2j+1`` (head side) with ``N = n*(k+1)``;
    the new source and target come last.
    """
    if len(g.sources) != 1 or len(g.targets) != 1:
        raise InvalidArgument("gadget needs exactly one source and one target")
    if k < 0:
        raise InvalidArgument("budget must be nonnegative")
    (s,), (t,) = tuple(g.sources), tuple(g.targets)
    copies = k + 1
    N = g.n * copies
    big = sum(g.capacities, Fraction(0))
    edges, caps = [], []
    for j, ((u, v), c) in enumerate(zip(g.edges, g.capacities)):
        eu, ev = N + 2 * j, N + 2 * j + 1
        for i in range(copies):
            edges.append((u * copies + i, eu))
            caps.append(big)
        edges.append((eu, ev))
        caps.append(c)
        for i in range(copies):
            edges.append((ev, v * copies + i))
            caps.append(big)
    s0, t0 = N + 2 * len(g.edges), N + 2 * len(g.edges) + 1
    for i in range(copies):
        edges.append((s0, s * copies + i))
        caps.append(big)
        edges.append((t * copies + i, t0))
        caps.append(big)
    return Instance(t0 + 1, tuple(edges), tuple(caps), sources={s0}, targets={t0})
