from fractions import Fraction

import pytest

from sensorplace import (InvalidArgument, build_pc, build_pq, evaluate_placement, export_lp,
                         make_grid, read_lp, relax, solve_exact, solve_lp)
from sensorplace.lp import INFEASIBLE, OPTIMAL, check_assignment
from sensorplace.milp import TIMEOUT, format_lp, integral_point, parse_lp
from frozen import load
from suites import adversarial_double, placement_suite

FROZEN = load()
SUITE = placement_suite()


def grid3():
    return make_grid(3).replace(sources=frozenset({0}), targets=frozenset({8}))


def test_pq_examples():
    g = grid3()
    f = build_pq(g, 0)
    assert f.bound_a == 2
    assert solve_exact(f).objective == 0
    res = solve_exact(build_pq(g, 1))
    assert res.objective == 2 and res.placement.value == 0
    with pytest.raises(InvalidArgument):
        build_pq(g, Fraction(3, 2))


def test_pc_examples():
    g = grid3()
    assert solve_exact(build_pc(g, 0)).objective == evaluate_placement(g, ())
    assert solve_exact(build_pc(g, 2)).objective == 0
    with pytest.raises(InvalidArgument):
        build_pc(g, 8)
    assert solve_exact(build_pc(adversarial_double(), 1)).objective == 1


def test_pc_grid4():
    from sensorplace.oracle import oracle_pc
    g = make_grid(4).replace(sources=frozenset({0, 3}), targets=frozenset({12, 15}))
    assert solve_exact(build_pc(g, 1)).objective == oracle_pc(g, 1).value


def test_pq_infeasible_status():
    from sensorplace import Instance
    direct = Instance(3, [(0, 2), (0, 1), (1, 2)], [1, 1, 1], {0}, {2})
    res = solve_exact(build_pq(direct, 1))
    assert res.status == INFEASIBLE and res.placement is None


def test_relaxation_bounds():
    for seed, inst, k, q in SUITE[:15]:
        f = build_pc(inst, k)
        assert solve_lp(relax(f).lp).objective <= solve_exact(f).objective
        fq = build_pq(inst, q)
        ex = solve_exact(fq)
        if ex.status == OPTIMAL:
            assert solve_lp(relax(fq).lp).objective <= ex.objective


def test_relaxed_needs_integral():
    with pytest.raises(InvalidArgument):
        solve_exact(relax(build_pc(grid3(), 1)))
    assert relax(build_pc(grid3(), 1)).binaries == ()


@pytest.mark.parametrize("seed,inst,k,q", SUITE[:30], ids=lambda x: str(x) if isinstance(x, int) else "")
def test_matches_frozen_oracle(seed, inst, k, q):
    row = FROZEN[seed]
    pc = solve_exact(build_pc(inst, k))
    assert pc.objective == row["pc"] == pc.placement.value
    pq = solve_exact(build_pq(inst, q))
    if row["pq"] is None:
        assert pq.status == INFEASIBLE
    else:
        assert pq.objective == row["pq"]
        assert pq.placement.value <= build_pq(inst, q).bound_a


def test_monotone_in_parameters():
    g = make_grid(3).replace(sources=frozenset({0, 2}), targets=frozenset({7, 8}))
    g = g.with_capacities([Fraction(1 + (i * 7) % 5) for i in range(len(g.edges))])
    pcs = [solve_exact(build_pc(g, k)).objective for k in range(4)]
    assert pcs == sorted(pcs, reverse=True)
    pqs = [solve_exact(build_pq(g, q)).objective for q in (0, Fraction(1, 3), Fraction(2, 3), 1)]
    assert pqs == sorted(pqs)


def test_integral_point_is_feasible():
    for seed, inst, k, q in SUITE[:10]:
        f = build_pc(inst, k)
        D = inst.placeable[:k]
        x = integral_point(f, D)
        assert not check_assignment(f.lp, x)
        assert x[f.var_M] == evaluate_placement(inst, D)


def test_limits_give_timeout():
    g = make_grid(4).replace(sources=frozenset({0, 3}), targets=frozenset({12, 15}))
    assert solve_exact(build_pc(g, 2), node_limit=1).status in (TIMEOUT, OPTIMAL)
    assert solve_exact(build_pc(g, 2), time_limit=1e-9).status == TIMEOUT


def test_export_round_trip(tmp_path):
    f = build_pq(grid3(), 1)
    p = tmp_path / "m.lp"
    export_lp(f, p)
    text = p.read_text()
    assert text.splitlines()[1] == "Minimize" or "Minimize" in text
    lp, binaries = read_lp(p)
    assert len(lp.constraints) == len(f.lp.constraints)
    assert set(binaries) == set(f.binaries)
    assert solve_lp(lp).objective == solve_lp(relax(f).lp).objective
    n_vars = len(f.lp.variables)
    n_cons = len(f.lp.constraints)
    header = sum(1 for line in text.splitlines()
                 if line.startswith(("\\", "Minimize", "Subject To", "Bounds", "Binaries", "End")))
    non_bin = n_vars - len(f.binaries)
    assert len(text.splitlines()) == header + 1 + n_cons + non_bin + len(f.binaries)


def test_pc_export_mentions_objective():
    text = format_lp(build_pc(grid3(), 0))
    assert " obj: M" in text
    lp, binaries = parse_lp(text)
    assert "M" not in binaries
    assert solve_lp(lp).objective == 2  # k=0: the relaxation already equals the max flow


def test_export_relaxed_has_no_binaries():
    text = format_lp(relax(build_pc(grid3(), 1)))
    assert "Binaries" not in text or text.split("Binaries")[1].strip() == "End"
