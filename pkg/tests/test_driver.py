from __future__ import annotations

import pytest

from conftest import random_graphs
from zykovsat.bounds import verify_witness
from zykovsat.driver import (
    KStep,
    SolveConfig,
    _check_monotone,
    decide_k,
    root_bounds,
    solve_chromatic,
)
from zykovsat.graph_io import (
    complete_graph,
    cycle_graph,
    empty_graph,
    erdos_renyi,
    grotzsch_graph,
    is_proper_coloring,
    num_colors,
    petersen_graph,
)
from zykovsat.oracle import oracle_chromatic
from zykovsat.sat import ContractViolation

MODES = ("zykov", "assignment", "full-zykov", "transitivity-only")


def check(g, rep, chi):
    assert rep.solved and rep.chi == chi
    assert is_proper_coloring(g, rep.coloring)
    assert num_colors(rep.coloring) == chi
    assert rep.lb == rep.ub == chi


@pytest.mark.parametrize("mode", MODES)
def test_named_graphs(mode):
    cfg = SolveConfig(mode=mode, debug=True)
    for g, chi in ((cycle_graph(5), 3), (petersen_graph(), 3), (grotzsch_graph(), 4),
                   (complete_graph(7), 7), (empty_graph(4), 1)):
        check(g, solve_chromatic(g, cfg), chi)


def test_complete_graph_solved_by_bounds():
    rep = solve_chromatic(complete_graph(7))
    assert rep.chi == 7 and rep.steps == []


def test_empty_input():
    rep = solve_chromatic(empty_graph(0))
    assert rep.chi == 0 and rep.coloring == {}


def test_root_bounds_grotzsch():
    g = grotzsch_graph()
    witness, coloring, order = root_bounds(g, SolveConfig())
    # triangle-free, so any bound above 2 needs Mycielskian rounds
    assert witness.bound >= 3 and witness.kind == "mycielskian"
    assert verify_witness(g.masks, witness)
    assert num_colors(coloring) >= 4


@pytest.mark.parametrize("seed", range(100))
def test_g20_matches_oracle(seed):
    g = erdos_renyi(20, 0.5, seed)
    rep = solve_chromatic(g, SolveConfig(seed=seed))
    check(g, rep, oracle_chromatic(g, limit=20))


@pytest.mark.parametrize("extra", [
    {}, {"search": "top-down"}, {"incremental": False}, {"mnts": False},
    {"dominated": False}, {"decision": "clique"}, {"preprocess": False},
])
def test_ablation_configs_agree(extra):
    for seed, g in random_graphs(25, 8, 14, base=300):
        chi = oracle_chromatic(g)
        for mode in MODES:
            check(g, solve_chromatic(g, SolveConfig(mode=mode, debug=True, seed=seed, **extra)), chi)


def test_incremental_steps_are_monotone():
    # without preprocessing several budgets are tried on one solver
    g = erdos_renyi(24, 0.5, 4)
    rep = solve_chromatic(g, SolveConfig(debug=True, preprocess=False, root_mnts_iters=1))
    results = [s.result for s in rep.steps]
    assert results == sorted(results, key=lambda r: r == "SAT")


def test_check_monotone_rejects_sat_then_unsat():
    with pytest.raises(ContractViolation):
        _check_monotone([KStep(3, "SAT", 0, 0), KStep(4, "UNSAT", 0, 0)], "bottom-up")
    _check_monotone([KStep(3, "UNSAT", 0, 0), KStep(4, "SAT", 0, 0)], "bottom-up")


def test_budget_exhaustion_reports_bounds():
    g = erdos_renyi(45, 0.5, 1)
    rep = solve_chromatic(g, SolveConfig(mode="full-zykov", conflict_limit=20))
    assert rep.status == "timeout" and rep.chi is None
    assert rep.lb < rep.ub
    assert is_proper_coloring(g, rep.coloring) and num_colors(rep.coloring) == rep.ub


def test_time_limit():
    g = erdos_renyi(45, 0.5, 1)
    rep = solve_chromatic(g, SolveConfig(mode="full-zykov", time_limit=0.2))
    assert rep.status == "timeout"


def test_decide_examples():
    assert decide_k(cycle_graph(5), 2).status == "UNSAT"
    res = decide_k(cycle_graph(5), 3)
    assert res.status == "SAT" and is_proper_coloring(cycle_graph(5), res.coloring)
    g = erdos_renyi(9, 0.5, 3)
    assert decide_k(g, g.n).status == "SAT"
    for mode in MODES:
        assert decide_k(complete_graph(4), 3, SolveConfig(mode=mode)).status == "UNSAT"
    with pytest.raises(ValueError):
        decide_k(g, 0)


@pytest.mark.parametrize("seed,g", random_graphs(60, 5, 13, base=900))
def test_decide_matches_oracle(seed, g):
    chi = oracle_chromatic(g)
    for mode in MODES:
        cfg = SolveConfig(mode=mode, debug=True)
        for k in range(max(1, chi - 1), chi + 1):
            res = decide_k(g, k, cfg)
            assert res.status == ("SAT" if k >= chi else "UNSAT")
            if res.coloring is not None:
                assert is_proper_coloring(g, res.coloring) and num_colors(res.coloring) <= k


def test_config_validation():
    with pytest.raises(ValueError):
        SolveConfig(mode="bogus")
    with pytest.raises(ValueError):
        SolveConfig(search="sideways")
    assert SolveConfig(mode="zykov").pruning
    assert not SolveConfig(mode="transitivity-only").pruning
    assert SolveConfig(search="top-down", mnts=False).flags() == "top-down+no-mnts"


def test_deterministic_conflicts():
    g = erdos_renyi(30, 0.5, 1)
    a = solve_chromatic(g, SolveConfig(mode="transitivity-only", seed=3))
    b = solve_chromatic(g, SolveConfig(mode="transitivity-only", seed=3))
    assert a.stats == b.stats and a.coloring == b.coloring
