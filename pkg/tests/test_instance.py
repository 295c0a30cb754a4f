from fractions import Fraction

import pytest

from sensorplace import (Instance, InvalidArgument, ValidationError, add_super_source,
                         cmfnip_gadget, make_grid, maxflow, randomize_capacities,
                         sample_roles, with_uniform_risk)
from sensorplace.instance import derive_seed, make_rng


@pytest.mark.parametrize("side,edges", [(2, 8), (3, 24), (10, 360)])
def test_grid_sizes(side, edges):
    g = make_grid(side)
    assert g.n == side * side
    assert len(g.edges) == edges


def test_grid_edge_formula_and_adjacency():
    for side in range(2, 21):
        g = make_grid(side)
        assert len(g.edges) == 4 * side * (side - 1)
        pairs = {(u, v) for u in range(g.n) for v in range(g.n)
                 if abs(u // side - v // side) + abs(u % side - v % side) == 1}
        assert set(g.edges) == pairs


def test_grid_rejects_small_side():
    with pytest.raises(InvalidArgument):
        make_grid(1)


def test_capacity_draws():
    g = make_grid(4)
    assert set(randomize_capacities(g, 150, 150, 1).capacities) == {150}
    a = randomize_capacities(g, 100, 200, 9)
    assert all(100 <= c <= 200 and c.denominator == 1 for c in a.capacities)
    assert a == randomize_capacities(g, 100, 200, 9)
    assert a != randomize_capacities(g, 100, 200, 10)
    real = randomize_capacities(g, 1, 2, 3, integral=False)
    assert all(1 <= c <= 2 for c in real.capacities)
    with pytest.raises(InvalidArgument):
        randomize_capacities(g, 5, 4, 1)


def test_sample_roles():
    g = make_grid(10)
    r = sample_roles(g, 10, 40, 5)
    assert len(r.targets) == 10 and len(r.sources) == 40
    assert not r.targets & r.sources
    assert r == sample_roles(g, 10, 40, 5)
    full = sample_roles(make_grid(3), 9, 0, 1)
    assert full.targets == frozenset(range(9)) and not full.sources
    with pytest.raises(InvalidArgument):
        sample_roles(make_grid(3), 5, 5, 1)


def test_validation():
    with pytest.raises(ValidationError):
        Instance(2, [(0, 1)], [1], {0}, {0})
    with pytest.raises(ValidationError):
        Instance(2, [(0, 0)], [1])
    with pytest.raises(ValidationError):
        Instance(2, [(0, 1), (0, 1)], [1, 2])
    with pytest.raises(ValidationError):
        Instance(2, [(0, 1)], [-1])
    with pytest.raises(ValidationError):
        Instance(2, [(0, 1)], [1], risk={0: Fraction(3, 2), 1: 0})


def test_super_source_capacities():
    g = randomize_capacities(make_grid(3), 100, 100, 0)
    g = with_uniform_risk(g.replace(targets=frozenset({8})), Fraction(1, 2))
    h = add_super_source(g)
    ss = h.super_source
    cap = h.capacity
    assert cap[ss, 0] == 100 and cap[ss, 1] == 150 and cap[ss, 4] == 200
    assert h.sources == {ss}
    assert ss not in h.placeable


def test_super_source_examples():
    inst = Instance(3, [(0, 1), (0, 2)], [3, 4], targets={2}, risk={0: 1, 1: 1})
    h = add_super_source(inst)
    assert h.capacity[h.super_source, 0] == 7
    zero = add_super_source(inst.replace(risk={0: 0, 1: 0}))
    assert maxflow(zero, 2).value == 0
    with pytest.raises(InvalidArgument):
        add_super_source(inst.replace(risk=None))


def test_gadget_examples():
    one = Instance(2, [(0, 1)], [5], {0}, {1})
    g = cmfnip_gadget(one, 1)
    (s0,), (t0,) = g.sources, g.targets
    assert maxflow(g, t0).value == 5
    empty = cmfnip_gadget(Instance(2, [], [], {0}, {1}), 1)
    assert maxflow(empty, next(iter(empty.targets))).value == 0
    par = Instance(4, [(0, 1), (1, 3), (0, 2), (2, 3)], [3, 3, 4, 4], {0}, {3})
    gp = cmfnip_gadget(par, 1)
    t0 = next(iter(gp.targets))
    assert maxflow(gp, t0).value == 7
    N = par.n * 2
    eu = N + 2 * 2  # tail-side vertex of arc (0, 2)
    cut = gp.with_capacities([0 if eu in e else c for e, c in zip(gp.edges, gp.capacities)])
    assert maxflow(cut, t0).value == 3
    with pytest.raises(InvalidArgument):
        cmfnip_gadget(Instance(3, [], [], {0, 1}, {2}), 1)


def test_seed_derivation():
    assert derive_seed(1, "a", 2) == derive_seed(1, "a", 2)
    assert derive_seed(1, "a", 2) != derive_seed(1, "a", 3)
    assert make_rng(5, "x").random() == make_rng(5, "x").random()
    with pytest.raises(InvalidArgument):
        make_rng(-1)
