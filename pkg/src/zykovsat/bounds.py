"""Coloring upper bound and clique / Mycielskian lower bounds.

The clique and Mycielskian routines work on a *graph view*: ``adj`` is
indexable by vertex id and holds neighbor bitmasks (bit v set for neighbor
v), and ``verts`` is a bitmask of the vertices that exist. ``Graph.masks``
is such a view for a static graph; the propagator passes its working graph
over bag representatives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph_io import Graph


_CHUNK_CACHE: dict = {}


def _chunk(base: int, byte: int) -> tuple[int, ...]:
    key = (base, byte)
    got = _CHUNK_CACHE.get(key)
    if got is None:
        got = _CHUNK_CACHE[key] = tuple(base + i for i in range(8) if byte >> i & 1)
    return got


def bits(mask: int) -> list[int]:
    """Ascending positions of the set bits."""
    out = []
    base = 0
    cache = _CHUNK_CACHE
    while mask:
        byte = mask & 255
        if byte:
            got = cache.get((base, byte))
            out.extend(got if got is not None else _chunk(base, byte))
        mask >>= 8
        base += 8
    return out


def vertex_mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def full_view(g: Graph) -> tuple[tuple, int]:
    return g.masks, ((1 << (g.n + 1)) - 2)


def is_clique(adj, vertices) -> bool:
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return False
    for i, u in enumerate(vs):
        need = vertex_mask(vs[i + 1:])
        if adj[u] & need != need:
            return False
    return True


# --------------------------------------------------------------------------
# DSatur

def dsatur(g: Graph) -> tuple[dict[int, int], list[int]]:
    """Greedy coloring picking max saturation, then max degree, then lowest id.

    Returns the coloring (colors from 1) and the selection order.
    """
    color: dict[int, int] = {}
    seen: dict[int, set[int]] = {v: set() for v in g.vertices}
    deg = {v: len(g.adj[v]) for v in g.vertices}
    order: list[int] = []
    uncolored = set(g.vertices)
    while uncolored:
        v = max(uncolored, key=lambda x: (len(seen[x]), deg[x], -x))
        c = 1
        while c in seen[v]:
            c += 1
        color[v] = c
        order.append(v)
        uncolored.discard(v)
        for w in g.adj[v]:
            if w in uncolored:
                seen[w].add(c)
    return color, order


# --------------------------------------------------------------------------
# greedy clique candidates

def greedy_cliques(adj, order, seed_clique=()) -> list[int]:
    """Largest clique from a list of greedily grown candidates.

    Vertices are visited with the seed clique first, then ``order``; each
    vertex joins every candidate it is adjacent to, or opens a new singleton
    candidate. A final pass offers every vertex to every candidate again.
    """
    seed = list(seed_clique)
    in_seed = set(seed)
    seq = seed + [v for v in order if v not in in_seed]
    members: list[list[int]] = []
    common: list[int] = []
    for v in seq:
        placed = False
        for i, cand in enumerate(common):
            if cand >> v & 1:
                members[i].append(v)
                common[i] = cand & adj[v]
                placed = True
        if not placed:
            members.append([v])
            common.append(adj[v])
    for i in range(len(members)):
        cand = common[i]
        if not cand:
            continue
        for v in seq:
            if cand >> v & 1:
                members[i].append(v)
                cand &= adj[v]
        common[i] = cand
    if not members:
        return []
    return max(members, key=len)


# --------------------------------------------------------------------------
# multi-neighborhood tabu search

DROP_TENURE = 7
SWAP_TENURE_SPREAD = 7


def mnts_clique(adj, verts: int, iter_max: int = 200, tabu_depth: int = 25, seed: int = 0,
                target: int | None = None) -> list[int]:
    """Clique by tabu search over add / swap / drop moves.

    Each restart builds a random maximal clique, then moves until
    ``tabu_depth`` consecutive moves fail to improve on the restart's best
    size. ``iter_max`` bounds the total number of moves across restarts.
    Add moves win over swaps, swaps over drops; a tabu add is still allowed
    when it beats the best clique found so far. The search stops early once
    a clique of size ``target`` is found.
    """
    if iter_max < 1 or tabu_depth < 1:
        raise ValueError("iter_max and tabu_depth must be >= 1")
    vs = bits(verts)
    if not vs:
        return []
    rng = random.Random(seed)
    best: list[int] = []
    tabu: dict[int, int] = {}
    it = 0
    while it < iter_max:
        if target is not None and len(best) >= target:
            break
        v = rng.choice(vs)
        clique = {v}
        cmask = 1 << v
        cand = adj[v] & verts
        while cand:
            # keep the candidate set large; random among the best
            scored = [((adj[x] & cand).bit_count(), x) for x in bits(cand)]
            top = max(sc for sc, _ in scored)
            w = rng.choice([x for sc, x in scored if sc == top])
            clique.add(w)
            cmask |= 1 << w
            cand &= adj[w]
        if len(clique) > len(best):
            best = sorted(clique)
        local_best = len(clique)
        stale = 0
        while stale < tabu_depth and it < iter_max:
            if target is not None and len(best) >= target:
                break
            it += 1
            add_moves = []
            swap_moves = []
            for w in vs:
                if cmask >> w & 1:
                    continue
                miss = cmask & ~adj[w]
                if not miss:
                    add_moves.append(w)
                elif not miss & (miss - 1):
                    swap_moves.append((w, miss.bit_length() - 1))
            aspire = len(clique) + 1 > len(best)
            adds = [w for w in add_moves if aspire or tabu.get(w, 0) <= it]
            if adds:
                w = rng.choice(adds)
                clique.add(w)
                cmask |= 1 << w
            else:
                swaps = [m for m in swap_moves if tabu.get(m[0], 0) <= it]
                if swaps:
                    w, u = rng.choice(swaps)
                    clique.discard(u)
                    clique.add(w)
                    cmask ^= (1 << u) | (1 << w)
                    tabu[u] = it + len(swap_moves) + rng.randint(1, SWAP_TENURE_SPREAD)
                elif clique:
                    u = rng.choice(sorted(clique))
                    clique.discard(u)
                    cmask ^= 1 << u
                    tabu[u] = it + DROP_TENURE
                else:
                    w = rng.choice(vs)
                    clique.add(w)
                    cmask |= 1 << w
            if len(clique) > local_best:
                local_best = len(clique)
                stale = 0
            else:
                stale += 1
            if len(clique) > len(best):
                best = sorted(clique)
    return best


# --------------------------------------------------------------------------
# Mycielskian witnesses

@dataclass(frozen=True)
class BoundWitness:
    """Lower-bound certificate: a base clique plus Mycielskian extension rounds.

    Each round is ``(us, w)``: for the current vertex list v_1..v_s, ``us[i]``
    is adjacent to every witness neighbor of v_i and ``w`` is adjacent to all
    of ``us``. Every round raises the certified bound by one.
    """

    base: tuple[int, ...]
    rounds: tuple = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @property
    def bound(self) -> int:
        return len(self.base) + len(self.rounds)

    @property
    def kind(self) -> str:
        return "mycielskian" if self.rounds else "clique"

    @property
    def level(self) -> int:
        return len(self.rounds)

    def _build(self):
        if "built" not in self._cache:
            order, edges = _replay(self.base, self.rounds)
            self._cache["built"] = (tuple(order), frozenset(edges))
        return self._cache["built"]

    def vertices(self) -> tuple[int, ...]:
        return self._build()[0]

    def edges(self) -> frozenset:
        return self._build()[1]

    @classmethod
    def from_clique(cls, clique) -> "BoundWitness":
        return cls(tuple(clique))


def _pair(u, v):
    return (u, v) if u < v else (v, u)


def _replay(base, rounds):
    order = list(base)
    edges = {_pair(a, b) for i, a in enumerate(base) for b in base[i + 1:]}
    for us, w in rounds:
        nbr = _witness_nbrs(order, edges)
        new_edges = set()
        for v, u in zip(order, us):
            for x in nbr[v]:
                new_edges.add(_pair(u, x))
            new_edges.add(_pair(u, w))
        present = set(order)
        for x in (*us, w):
            if x not in present:
                order.append(x)
                present.add(x)
        edges |= new_edges
    return order, edges


def _witness_nbrs(order, edges):
    nbr = {v: set() for v in order}
    for a, b in edges:
        nbr[a].add(b)
        nbr[b].add(a)
    return nbr


def verify_witness(adj, witness: BoundWitness) -> bool:
    """Structural check of a witness against a graph view."""
    base = witness.base
    if not base or not is_clique(adj, base):
        return False
    order = list(base)
    edges = {_pair(a, b) for i, a in enumerate(base) for b in base[i + 1:]}
    for us, w in witness.rounds:
        if len(us) != len(order):
            return False
        nbr = _witness_nbrs(order, edges)
        for v, u in zip(order, us):
            need = vertex_mask(nbr[v])
            if u == w or adj[u] & need != need or not adj[w] >> u & 1:
                return False
            for x in nbr[v]:
                edges.add(_pair(u, x))
            edges.add(_pair(u, w))
        present = set(order)
        for x in (*us, w):
            if x not in present:
                order.append(x)
                present.add(x)
    return all(adj[a] >> b & 1 for a, b in edges)


def mycielskian_bound(adj, verts: int, start: BoundWitness, max_rounds: int = 1) -> BoundWitness:
    """Extend ``start`` by up to ``max_rounds`` greedy Mycielskian rounds.

    For each witness vertex v_i the admissible copies are
    U_i = {u : N_H(v_i) subset of N(u)}. The hub w is the vertex whose
    neighborhood meets the most U_i (lowest id on ties); a round succeeds only
    if it meets all of them. Each u_i is v_i itself when v_i is adjacent to
    w, else the lowest admissible id.
    """
    order, edges = _replay(start.base, start.rounds)
    rounds = list(start.rounds)
    vs = bits(verts)
    for _ in range(max_rounds):
        nbr = _witness_nbrs(order, edges)
        admissible = []
        for v in order:
            m = verts
            for x in nbr[v]:
                m &= adj[x]
            admissible.append(m)
        # only full coverage yields a round, so the first fully covering
        # vertex is the coverage maximizer with the lowest id
        hub = None
        for w in vs:
            aw = adj[w]
            if all(m & aw for m in admissible):
                hub = w
                break
        if hub is None:
            break
        aw = adj[hub]
        us = []
        for v, m in zip(order, admissible):
            if aw >> v & 1:
                us.append(v)
            else:
                hit = m & aw
                us.append((hit & -hit).bit_length() - 1)
        rounds.append((tuple(us), hub))
        order, edges = _replay(start.base, rounds)
    return BoundWitness(tuple(start.base), tuple(rounds))
