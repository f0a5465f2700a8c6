"""Exhaustive ground truth for small graphs.

Two unrelated methods: color backtracking with first-use canonicalization
(the main oracle) and a dynamic program over vertex subsets (cross-check).
"""

from __future__ import annotations

from .graph_io import Graph

DEFAULT_LIMIT = 16


class OracleTooLarge(ValueError):
    pass


def _guard(g: Graph, limit: int) -> None:
    if g.n > limit:
        raise OracleTooLarge(f"oracle refuses n={g.n} > {limit}")


def _order(g: Graph) -> list[int]:
    # each next vertex has the most neighbors among those already placed
    left = set(g.vertices)
    order: list[int] = []
    placed: set[int] = set()
    while left:
        v = max(left, key=lambda x: (len(g.adj[x] & placed), len(g.adj[x]), -x))
        order.append(v)
        placed.add(v)
        left.remove(v)
    return order


def find_coloring(g: Graph, k: int, *, limit: int = DEFAULT_LIMIT) -> dict[int, int] | None:
    """A proper coloring with colors 1..k, or None if none exists."""
    _guard(g, limit)
    if g.n == 0:
        return {}
    if k <= 0:
        return None
    order = _order(g)
    pos = {v: i for i, v in enumerate(order)}
    # earlier neighbors of each position
    back = [[pos[w] for w in g.adj[v] if pos[w] < i] for i, v in enumerate(order)]
    color = [0] * len(order)

    def rec(i: int, used: int) -> bool:
        if i == len(order):
            return True
        taken = {color[j] for j in back[i]}
        for c in range(1, min(used + 1, k) + 1):
            if c not in taken:
                color[i] = c
                if rec(i + 1, max(used, c)):
                    return True
        color[i] = 0
        return False

    if not rec(0, 0):
        return None
    return {v: color[pos[v]] for v in g.vertices}


def oracle_k_colorable(g: Graph, k: int, *, limit: int = DEFAULT_LIMIT) -> bool:
    return find_coloring(g, k, limit=limit) is not None


def oracle_chromatic(g: Graph, *, limit: int = DEFAULT_LIMIT) -> int:
    _guard(g, limit)
    k = 0
    while find_coloring(g, k, limit=limit) is None:
        k += 1
    return k


def chromatic_subset_dp(g: Graph, *, limit: int = 12) -> int:
    """chi(g) by dynamic programming over vertex subsets, O(3^n)."""
    _guard(g, limit)
    n = g.n
    full = (1 << n) - 1
    nbr = [0] * n
    for u, v in g.edges:
        nbr[u - 1] |= 1 << (v - 1)
        nbr[v - 1] |= 1 << (u - 1)
    indep = [True] * (full + 1)
    for s in range(1, full + 1):
        low = (s & -s).bit_length() - 1
        rest = s & ~(1 << low)
        indep[s] = indep[rest] and not (nbr[low] & rest)
    best = [0] * (full + 1)
    for s in range(1, full + 1):
        low = s & -s
        rest = s ^ low
        b = n + 1
        sub = rest
        while True:
            t = sub | low
            if indep[t]:
                cand = best[s ^ t] + 1
                if cand < b:
                    b = cand
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[s] = b
    return best[full]
