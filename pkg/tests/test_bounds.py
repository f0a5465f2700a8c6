from __future__ import annotations

import pytest

from conftest import random_graphs
from zykovsat.bounds import (
    BoundWitness,
    bits,
    dsatur,
    full_view,
    greedy_cliques,
    is_clique,
    mnts_clique,
    mycielskian_bound,
    verify_witness,
)
from zykovsat.graph_io import (
    Graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    erdos_renyi,
    grotzsch_graph,
    is_proper_coloring,
    num_colors,
)
from zykovsat.oracle import oracle_chromatic

TWO_TRIANGLES = Graph.from_edges(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])


def witness_graph(w: BoundWitness) -> Graph:
    vs = list(w.vertices())
    idx = {v: i for i, v in enumerate(vs, 1)}
    return Graph.from_edges(len(vs), [(idx[a], idx[b]) for a, b in w.edges()])


def test_bits():
    assert bits(0) == []
    assert bits(0b10110) == [1, 2, 4]
    assert bits(1 << 300 | 2) == [1, 300]


@pytest.mark.parametrize("g,colors", [
    (complete_graph(5), 5), (cycle_graph(5), 3), (empty_graph(7), 1),
])
def test_dsatur_examples(g, colors):
    col, order = dsatur(g)
    assert num_colors(col) == colors
    assert sorted(order) == list(g.vertices)
    assert is_proper_coloring(g, col)


def test_dsatur_tiebreak_lowest_id():
    _, order = dsatur(empty_graph(4))
    assert order == [1, 2, 3, 4]


def test_greedy_examples():
    adj, _ = full_view(complete_graph(4))
    assert len(greedy_cliques(adj, [1, 2, 3, 4], [1])) == 4
    adj, _ = full_view(cycle_graph(5))
    assert len(greedy_cliques(adj, [1, 2, 3, 4, 5], [1, 2])) == 2
    adj, _ = full_view(TWO_TRIANGLES)
    assert len(greedy_cliques(adj, list(range(1, 7)))) == 3
    assert greedy_cliques(adj, []) == []


def test_mnts_examples():
    adj, verts = full_view(complete_graph(6))
    assert len(mnts_clique(adj, verts)) == 6
    adj, verts = full_view(cycle_graph(5))
    assert len(mnts_clique(adj, verts)) == 2
    assert mnts_clique(adj, 0) == []
    with pytest.raises(ValueError):
        mnts_clique(adj, verts, iter_max=0)


def test_mnts_deterministic_per_seed():
    g = erdos_renyi(40, 0.5, 9)
    adj, verts = full_view(g)
    assert mnts_clique(adj, verts, seed=3) == mnts_clique(adj, verts, seed=3)


def test_mnts_at_least_greedy():
    worse = 0
    for s in range(100):
        g = erdos_renyi(50, 0.5, 1000 + s)
        adj, verts = full_view(g)
        _, order = dsatur(g)
        a = mnts_clique(adj, verts, seed=s)
        b = greedy_cliques(adj, order)
        assert is_clique(adj, a) and is_clique(adj, b)
        worse += len(a) < len(b)
    assert worse == 0


def test_mycielskian_from_edge_on_c5():
    adj, verts = full_view(cycle_graph(5))
    w = mycielskian_bound(adj, verts, BoundWitness.from_clique((1, 2)))
    assert w.bound == 3 and w.kind == "mycielskian" and w.level == 1
    assert w.edges() == cycle_graph(5).edges
    assert verify_witness(adj, w)


def test_mycielskian_grotzsch():
    g = grotzsch_graph()
    adj, verts = full_view(g)
    w = mycielskian_bound(adj, verts, BoundWitness.from_clique((1, 2)), max_rounds=5)
    assert w.bound == 4
    assert verify_witness(adj, w)
    assert oracle_chromatic(witness_graph(w)) >= 4


def test_mycielskian_k4_no_extension():
    adj, verts = full_view(complete_graph(4))
    w = mycielskian_bound(adj, verts, BoundWitness.from_clique((1, 2, 3, 4)))
    assert w.bound == 4 and w.kind == "clique"


def test_verify_witness_rejects_bad():
    adj, _ = full_view(cycle_graph(5))
    assert not verify_witness(adj, BoundWitness((1, 3)))
    assert not verify_witness(adj, BoundWitness((1, 2), (((4, 4), 4),)))
    assert not verify_witness(adj, BoundWitness(()))


@pytest.mark.parametrize("seed,g", random_graphs(200, 4, 12))
def test_bounds_sound(seed, g):
    chi = oracle_chromatic(g)
    adj, verts = full_view(g)
    col, order = dsatur(g)
    assert chi <= num_colors(col) <= g.max_degree() + 1
    clique = greedy_cliques(adj, order)
    seeded = greedy_cliques(adj, order, clique)
    assert is_clique(adj, seeded) and len(seeded) >= len(clique)
    w = mycielskian_bound(adj, verts, BoundWitness.from_clique(clique), max_rounds=4)
    assert verify_witness(adj, w)
    assert w.bound <= chi
    assert oracle_chromatic(witness_graph(w)) >= w.bound
