from __future__ import annotations

import pytest

from conftest import random_graphs
from zykovsat.bounds import dsatur, greedy_cliques
from zykovsat.encodings import (
    CNF,
    DecodeError,
    EdgeVarMap,
    build_assignment,
    build_full_zykov,
    decode_assignment_model,
    decode_zykov_model,
    transitivity_clauses,
)
from zykovsat.graph_io import (
    complete_graph,
    cycle_graph,
    empty_graph,
    is_proper_coloring,
    num_colors,
)
from zykovsat.oracle import oracle_chromatic
from zykovsat.sat import Solver, Status


def run(cnf):
    s = Solver(debug=True)
    s.ensure_vars(cnf.nvars)
    for c in cnf.clauses:
        s.add_clause(c)
    st = s.solve()
    value = (lambda x: s.model[x - 1] > 0) if st == Status.SAT else None
    return st, value


def test_assignment_examples():
    assert run(build_assignment(complete_graph(3), 2, [1, 2]))[0] == Status.UNSAT
    st, value = run(build_assignment(complete_graph(3), 3, [1, 2, 3]))
    assert st == Status.SAT
    assert sorted(decode_assignment_model(value, complete_graph(3), 3).values()) == [1, 2, 3]
    assert run(build_assignment(cycle_graph(5), 3, [1, 2]))[0] == Status.SAT
    assert run(build_assignment(cycle_graph(5), 2, [1, 2]))[0] == Status.UNSAT


def test_assignment_oversized_clique_is_empty_clause():
    cnf = build_assignment(complete_graph(4), 3, [1, 2, 3, 4])
    assert cnf.clauses == [[]]


def test_assignment_clique_fixing():
    st, value = run(build_assignment(cycle_graph(5), 3, [2, 3]))
    col = decode_assignment_model(value, cycle_graph(5), 3)
    assert (col[2], col[3]) == (1, 2)


def test_assignment_rejects_k0():
    with pytest.raises(ValueError):
        build_assignment(cycle_graph(5), 0)


def test_full_zykov_examples():
    g = cycle_graph(5)
    z = build_full_zykov(g, 3)
    st, value = run(z.cnf)
    assert st == Status.SAT
    col = decode_zykov_model(value, g, 3, z.evars)
    assert is_proper_coloring(g, col) and num_colors(col) == 3
    assert run(build_full_zykov(cycle_graph(5), 2).cnf)[0] == Status.UNSAT
    k4 = build_full_zykov(complete_graph(4), 3)
    assert len(k4.evars) == 0
    assert run(k4.cnf)[0] == Status.UNSAT
    st, value = run(build_full_zykov(empty_graph(5), 1).cnf)
    assert st == Status.SAT
    assert set(decode_zykov_model(value, empty_graph(5), 1).values()) == {1}


def test_variable_numbering():
    g = cycle_graph(5)
    z = build_full_zykov(g, 3)
    assert z.evars.pairs == [(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]
    assert list(z.evars.vars()) == [1, 2, 3, 4, 5]
    assert z.cvars == [6, 7, 8, 9, 10]
    assert z.evars.var(5, 2) == z.evars.var(2, 5) == 4
    assert z.evars.var(1, 2) is None
    text = z.cnf.to_dimacs()
    assert text.startswith("c Zykov encoding n=5 m=5 k=3\n")
    header = next(line for line in text.splitlines() if line.startswith("p "))
    assert header == f"p cnf {z.cnf.nvars} {len(z.cnf.clauses)}"


def test_transitivity_simplification():
    # path 1-2-3: e13 is the only variable; every rotation has a constant edge
    g = complete_graph(3)
    assert transitivity_clauses(g, EdgeVarMap(g)) == []
    p = empty_graph(3)
    clauses = transitivity_clauses(p, EdgeVarMap(p))
    assert sorted(map(sorted, clauses)) == [[-3, -2, 1], [-3, -1, 2], [-2, -1, 3]]


def test_decode_rejects_bad_models():
    g = cycle_graph(5)
    ev = EdgeVarMap(g)
    with pytest.raises(DecodeError):
        decode_zykov_model(lambda x: False, g, 3, ev)  # five singleton classes
    with pytest.raises(DecodeError):
        decode_assignment_model(lambda x: False, g, 3)
    assert decode_zykov_model(lambda x: False, complete_graph(4), 4) == {1: 1, 2: 2, 3: 3, 4: 4}


def test_cnf_container():
    cnf = CNF()
    a, b = cnf.new_var(), cnf.new_var()
    cnf.add([a, -b])
    cnf.add([5])
    assert cnf.nvars == 5
    assert cnf.to_dimacs().splitlines() == ["p cnf 5 2", "1 -2 0", "5 0"]


@pytest.mark.parametrize("seed,g", random_graphs(200, 1, 10))
def test_encodings_agree_with_oracle(seed, g):
    chi = oracle_chromatic(g)
    _, order = dsatur(g)
    clique = greedy_cliques(g.masks, order)
    for k in range(1, g.n + 1):
        want = k >= chi
        a, _ = run(build_assignment(g, k, clique))
        plain, _ = run(build_assignment(g, k, symmetry=False))
        z = build_full_zykov(g, k)
        st, value = run(z.cnf)
        assert (a == Status.SAT) == (plain == Status.SAT) == (st == Status.SAT) == want
        if value is not None:
            col = decode_zykov_model(value, g, k, z.evars)
            assert is_proper_coloring(g, col)
