"""Scenario replication harness.

A scenario sweeps one parameter (sensor budget ``k``, grid size or quality
factor ``q``) and, for every value, runs the exact solver and the matching
heuristic over a three-level replication: capacity draws, target draws and
source draws.  Results are averaged per (method, parameter) and written as
CSV with header ``method,param,mean_value,mean_time_s,n,seed``.

Scenarios ``1`` and ``2`` are PC (sweep ``k``, sweep grid side), ``3`` and
``4`` are PQ (sweep ``q``, sweep grid side).  A ``b`` suffix replaces the
drawn sources by a super source fed through a risk map; the source level of
the replication then collapses to a single draw.

Sources are drawn uniformly from ``V`` minus ``T``.  With
``source_pool = "nonadjacent"`` they are drawn from vertices with no arc to
or from a target instead, which guarantees that sensors on every placeable
vertex stop all attack flow (every PQ instance is feasible, every PC curve
can reach zero).
"""
from __future__ import annotations

import ast
import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction

from .errors import InfeasibleError, InvalidArgument
from .heuristics import pc_iterative_best_sensor, pq_iterative_best_sensor
from .instance import (Instance, add_super_source, as_fraction, derive_seed,
                       make_grid, make_rng, randomize_capacities)
from .lp import INFEASIBLE, OPTIMAL
from .milp import TIMEOUT, build_pc, build_pq, solve_exact

SCENARIOS = ("1", "2", "3", "4", "1b", "2b", "3b", "4b")
CSV_HEADER = ("method", "param", "mean_value", "mean_time_s", "n", "seed")


@dataclass
class ScenarioConfig:
    scenario: str = "1"
    sides: list[int] = field(default_factory=lambda: [6])
    ks: list[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    k: int = 3
    qs: list[Fraction] = field(default_factory=lambda: [Fraction(1, 4), Fraction(1, 2),
                                                        Fraction(3, 4), Fraction(1)])
    q: Fraction = Fraction(1, 2)
    n_targets: int = 4
    n_sources: int = 10
    risk: Fraction = Fraction(1, 2)
    risk_file: str | None = None
    cap_lo: Fraction = Fraction(100)
    cap_hi: Fraction = Fraction(200)
    cap_seeds: int = 2
    target_seeds: int = 2
    source_seeds: int = 2
    seed: int = 42
    time_budget: float = 600.0
    methods: list[str] | None = None
    workers: int = 1
    source_pool: str = "uniform"

    def __post_init__(self):
        self.scenario = str(self.scenario)
        if self.scenario not in SCENARIOS:
            raise InvalidArgument(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        self.sides = [int(s) for s in self.sides]
        self.ks = [int(k) for k in self.ks]
        self.qs = [as_fraction(q) for q in self.qs]
        self.q = as_fraction(self.q)
        self.risk = as_fraction(self.risk)
        self.cap_lo, self.cap_hi = as_fraction(self.cap_lo), as_fraction(self.cap_hi)
        if self.time_budget <= 0:
            raise InvalidArgument("time budget must be positive")
        if min(self.cap_seeds, self.target_seeds, self.source_seeds) < 1:
            raise InvalidArgument("replication counts must be at least 1")
        if not self.sides:
            raise InvalidArgument("at least one grid side is required")
        if self.source_pool not in ("uniform", "nonadjacent"):
            raise InvalidArgument(f"source_pool must be 'uniform' or 'nonadjacent', got {self.source_pool!r}")
        if self.methods is None:
            self.methods = ["PC", "PCIter"] if self.kind == "PC" else ["PQ", "PQIter"]
        allowed = {"PC", "PCIter"} if self.kind == "PC" else {"PQ", "PQIter"}
        bad = set(self.methods) - allowed
        if bad:
            raise InvalidArgument(f"methods {sorted(bad)} do not belong to scenario {self.scenario}")

    @property
    def kind(self) -> str:
        return "PC" if self.scenario[0] in "12" else "PQ"

    @property
    def super_source(self) -> bool:
        return self.scenario.endswith("b")

    @property
    def replications(self) -> int:
        return self.cap_seeds * self.target_seeds * (1 if self.super_source else self.source_seeds)

    def points(self) -> list[tuple[int, object]]:
        """(grid side, parameter) pairs in sweep order; the parameter is k, q or |V|."""
        base = self.scenario[0]
        if base == "1":
            return [(self.sides[0], k) for k in self.ks]
        if base == "3":
            return [(self.sides[0], q) for q in self.qs]
        return [(s, s * s) for s in self.sides]


@dataclass(frozen=True)
class RunRecord:
    method: str
    param: object
    side: int
    replicate: tuple[int, int, int]
    value: Fraction | None
    seconds: float
    status: str = OPTIMAL


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    runs: list[RunRecord]

    def rows(self) -> list[tuple]:
        """Aggregated rows; the mean is absent unless every run of the group has a value."""
        groups: dict[tuple, list[RunRecord]] = {}
        for r in self.runs:
            groups.setdefault((r.method, r.param), []).append(r)
        out = []
        for (method, param), rs in groups.items():
            if all(r.value is not None for r in rs):
                mean = sum((r.value for r in rs), Fraction(0)) / len(rs)
            else:
                mean = None
            t = sum(r.seconds for r in rs) / len(rs)
            out.append((method, param, mean, t, len(rs), self.config.seed))
        return out

    def mean(self, method: str, param) -> Fraction | None:
        for m, p, mean, *_ in self.rows():
            if m == method and p == param:
                return mean
        raise KeyError((method, param))

    def mean_time(self, method: str, param) -> float:
        for m, p, _, t, *_ in self.rows():
            if m == method and p == param:
                return t
        raise KeyError((method, param))

    def to_csv(self, times: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for method, param, mean, t, n, seed in self.rows():
            w.writerow([method, _fmt_param(param), "" if mean is None else _fmt(mean),
                        f"{t:.6f}" if times else "", n, seed])
        return buf.getvalue()

    def runs_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("method", "param", "side", "cap_rep", "target_rep", "source_rep",
                    "status", "value", "time_s"))
        for r in self.runs:
            w.writerow([r.method, _fmt_param(r.param), r.side, *r.replicate, r.status,
                        "" if r.value is None else str(r.value), f"{r.seconds:.6f}"])
        return buf.getvalue()


def _fmt(x: Fraction) -> str:
    return f"{float(x):.6f}" if x.denominator != 1 else str(x.numerator)


def _fmt_param(p) -> str:
    if isinstance(p, Fraction):
        return _fmt(p) if p.denominator != 1 else str(p.numerator)
    return str(p)


# -- config files -----------------------------------------------------------------

def parse_config(text: str) -> ScenarioConfig:
    """Flat ``key = value`` lines; values are Python/TOML-style literals, ``#`` comments."""
    names = {f.name for f in fields(ScenarioConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise InvalidArgument(f"config line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in names:
            raise InvalidArgument(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = ast.literal_eval(val)
        except (ValueError, SyntaxError):
            raise InvalidArgument(f"config line {lineno}: cannot parse value {val!r}") from None
    for key in ("qs",):
        if key in values:
            values[key] = [Fraction(x) if isinstance(x, str) else as_fraction(x) for x in values[key]]
    for key in ("q", "risk", "cap_lo", "cap_hi"):
        if isinstance(values.get(key), str):
            values[key] = Fraction(values[key])
    return ScenarioConfig(**values)


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _read_risk(path) -> dict[int, Fraction]:
    risk = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].split()
            if line:
                risk[int(line[0])] = Fraction(line[1])
    return risk


# -- running ----------------------------------------------------------------------

def replicate_instances(cfg: ScenarioConfig, side: int) -> list[tuple[tuple[int, int, int], Instance]]:
    """Every replicate instance for one grid side, in canonical order."""
    grid = make_grid(side)
    override = _read_risk(cfg.risk_file) if cfg.risk_file else {}
    out = []
    for ci in range(cfg.cap_seeds):
        g = randomize_capacities(grid, cfg.cap_lo, cfg.cap_hi, derive_seed(cfg.seed, "cap", side, ci))
        for ti in range(cfg.target_seeds):
            T = make_rng(cfg.seed, "targets", side, ci, ti).sample(range(g.n), cfg.n_targets)
            rest = [v for v in range(g.n) if v not in set(T)]
            pool = rest
            if cfg.source_pool == "nonadjacent":
                near = {u for u, v in g.edges if v in T} | {v for u, v in g.edges if u in T}
                pool = [v for v in rest if v not in near]
                if len(pool) < cfg.n_sources:
                    raise InvalidArgument(
                        f"only {len(pool)} vertices are not adjacent to a target; need {cfg.n_sources}"
                    )
            if cfg.super_source:
                risk = {v: override.get(v, cfg.risk) for v in rest}
                inst = add_super_source(g.replace(targets=frozenset(T), risk=risk))
                out.append(((ci, ti, 0), inst))
                continue
            for si in range(cfg.source_seeds):
                S = make_rng(cfg.seed, "sources", side, ci, ti, si).sample(pool, cfg.n_sources)
                out.append(((ci, ti, si), g.replace(sources=frozenset(S), targets=frozenset(T))))
    return out


def _run_one(task) -> RunRecord:
    cfg, method, param, side, rep, inst = task
    budget = param if cfg.scenario[0] in "13" else (cfg.k if cfg.kind == "PC" else cfg.q)
    hseed = derive_seed(cfg.seed, "heur", side, *rep, _fmt_param(param))
    start = time.perf_counter()
    if method == "PC":
        res = solve_exact(build_pc(inst, budget), time_limit=cfg.time_budget)
        secs = time.perf_counter() - start
        value = res.objective if res.status == OPTIMAL else None
        return RunRecord(method, param, side, rep, value, secs, res.status)
    if method == "PQ":
        res = solve_exact(build_pq(inst, budget), time_limit=cfg.time_budget)
        secs = time.perf_counter() - start
        value = res.objective if res.status == OPTIMAL else None
        return RunRecord(method, param, side, rep, value, secs, res.status)
    if method == "PCIter":
        tr = pc_iterative_best_sensor(inst, budget, hseed)
    else:
        try:
            tr = pq_iterative_best_sensor(inst, budget, hseed)
        except InfeasibleError:
            return RunRecord(method, param, side, rep, None, time.perf_counter() - start, INFEASIBLE)
    secs = time.perf_counter() - start
    if secs > cfg.time_budget:
        return RunRecord(method, param, side, rep, None, secs, TIMEOUT)
    return RunRecord(method, param, side, rep, tr.objective, secs)


def scenario_tasks(cfg: ScenarioConfig) -> list[tuple]:
    tasks = []
    cache: dict[int, list] = {}
    for side, param in cfg.points():
        if side not in cache:
            cache[side] = replicate_instances(cfg, side)
        for method in cfg.methods:
            for rep, inst in cache[side]:
                tasks.append((cfg, method, param, side, rep, inst))
    return tasks


def run_scenario(cfg: ScenarioConfig, workers: int | None = None) -> ScenarioResult:
    """Run every (parameter, method, replicate) combination; order is canonical."""
    tasks = scenario_tasks(cfg)
    workers = cfg.workers if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_one, tasks))
    else:
        runs = [_run_one(t) for t in tasks]
    return ScenarioResult(cfg, runs)
