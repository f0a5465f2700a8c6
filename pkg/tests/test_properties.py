from __future__ import annotations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from truth import is_satisfiable
from zykovsat.driver import SolveConfig, decide_k, solve_chromatic
from zykovsat.graph_io import Graph, is_proper_coloring, num_colors, parse_dimacs, write_dimacs
from zykovsat.oracle import find_coloring, oracle_chromatic
from zykovsat.preprocess import recover, reduce
from zykovsat.sat import Solver, Status

SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, lo=1, hi=10):
    n = draw(st.integers(lo, hi))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, edges)


@st.composite
def cnfs(draw):
    n = draw(st.integers(1, 10))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=4), max_size=45))
    return n, clauses


@SETTINGS
@given(graphs(0, 14))
def test_dimacs_roundtrip(g):
    h = parse_dimacs(write_dimacs(g, "round trip"))
    assert h.n == g.n and h.sorted_edges() == g.sorted_edges()


@SETTINGS
@given(graphs(), st.integers(0, 6))
def test_reduce_recover(g, lb):
    chi = oracle_chromatic(g)
    lb = min(lb, chi)
    rg, log = reduce(g, lb)
    k = max(lb, oracle_chromatic(rg)) if rg.n else lb
    # reductions preserve max(lb, chi)
    assert k == max(lb, chi)
    if rg.n:
        part = find_coloring(rg, k)
    else:
        part = {}
    full = recover(log, part, max(k, 1))
    assert set(full) == set(g.vertices)
    assert is_proper_coloring(g, full) and num_colors(full) <= max(k, 1)


@SETTINGS
@given(graphs(1, 9), st.sampled_from(["zykov", "assignment", "full-zykov", "transitivity-only"]))
def test_modes_agree_with_oracle(g, mode):
    rep = solve_chromatic(g, SolveConfig(mode=mode, debug=True, preprocess=False))
    assert rep.chi == oracle_chromatic(g)
    assert is_proper_coloring(g, rep.coloring) and num_colors(rep.coloring) == rep.chi


@SETTINGS
@given(graphs(2, 9), st.integers(1, 5), st.sampled_from(["zykov", "assignment", "full-zykov"]))
def test_decide_agrees(g, k, mode):
    res = decide_k(g, k, SolveConfig(mode=mode, debug=True))
    assert (res.status == "SAT") == (oracle_chromatic(g) <= k)


@SETTINGS
@given(cnfs())
def test_solver_vs_truth_table(case):
    n, clauses = case
    s = Solver(debug=True)
    for c in clauses:
        s.add_clause(c)
    st_ = s.solve()
    assert (st_ == Status.SAT) == is_satisfiable(clauses, n)
    if st_ == Status.SAT:
        truth = set(s.model)
        assert all(any(l in truth for l in c) for c in clauses)
