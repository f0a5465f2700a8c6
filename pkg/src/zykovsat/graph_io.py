"""Graphs, DIMACS .col input/output and random graph generation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

MASK64 = 0xFFFFFFFFFFFFFFFF


class DimacsError(ValueError):
    pass


def canon(u: int, v: int) -> tuple[int, int]:
    """Canonical (smaller, larger) ordering of a vertex pair."""
    if u == v:
        raise ValueError(f"not a pair: {u}, {v}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n.

    ``labels`` optionally maps internal vertex ids back to the ids used in the
    source file (``labels[v - 1]``), for graphs that were renumbered on parse.
    """

    n: int
    edges: frozenset
    labels: tuple | None = None
    adj: tuple = field(init=False, repr=False, compare=False)
    masks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nbrs: list[set[int]] = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise ValueError(f"bad edge {(u, v)} for n={self.n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "adj", tuple(frozenset(s) for s in nbrs))
        masks = []
        for s in nbrs:
            m = 0
            for w in s:
                m |= 1 << w
            masks.append(m)
        object.__setattr__(self, "masks", tuple(masks))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> "Graph":
        return cls(n, frozenset(canon(u, v) for u, v in edges), labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj[1:]), default=0)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def induced(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Subgraph induced by ``keep``, renumbered to 1..len(keep).

        Returns the subgraph and the list ``old`` with ``old[new - 1]`` the
        original id of each new vertex.
        """
        old = sorted(set(keep))
        new_of = {v: i for i, v in enumerate(old, 1)}
        edges = [(new_of[u], new_of[v]) for u, v in self.edges if u in new_of and v in new_of]
        return Graph.from_edges(len(old), edges), old

    def label(self, v: int):
        return v if self.labels is None else self.labels[v - 1]


def nonedges(g: Graph) -> list[tuple[int, int]]:
    """All non-adjacent pairs (u, v), u < v, in lexicographic order."""
    out = []
    adj = g.adj
    for u in range(1, g.n + 1):
        au = adj[u]
        for v in range(u + 1, g.n + 1):
            if v not in au:
                out.append((u, v))
    return out


def is_proper_coloring(g: Graph, coloring) -> bool:
    """True if every vertex has a color and no edge is monochromatic."""
    try:
        return all(coloring[u] != coloring[v] for u, v in g.edges) and all(
            coloring[v] is not None for v in g.vertices
        )
    except (KeyError, IndexError):
        return False


def num_colors(coloring) -> int:
    values = coloring.values() if isinstance(coloring, dict) else coloring
    return len(set(values))


# --------------------------------------------------------------------------
# DIMACS

def parse_dimacs(text: str | Iterable[str], *, renumber: bool = False) -> Graph:
    """Parse a DIMACS edge-format graph.

    Accepts ``p edge n m`` (and the common ``p col n m`` variant). Duplicate
    edges and both orientations collapse. A mismatch with the declared edge
    count is only logged. With ``renumber=True`` vertex ids that fall outside
    1..n are compacted instead of rejected; the original ids are kept in
    ``Graph.labels``.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    n = None
    declared_m = None
    raw: list[tuple[int, int]] = []
    for lineno, line in enumerate(lines, 1):
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        kind = tok[0]
        if kind == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: duplicate problem line")
            if len(tok) < 4 or tok[1] not in ("edge", "edges", "col"):
                raise DimacsError(f"line {lineno}: malformed problem line {line.strip()!r}")
            n, declared_m = _ints(tok[2:4], lineno)
            if n < 0:
                raise DimacsError(f"line {lineno}: negative vertex count")
        elif kind == "e":
            if n is None:
                raise DimacsError(f"line {lineno}: edge before problem line (missing header)")
            if len(tok) < 3:
                raise DimacsError(f"line {lineno}: malformed edge line")
            u, v = _ints(tok[1:3], lineno)
            if u == v:
                raise DimacsError(f"line {lineno}: self-loop on vertex {u}")
            raw.append((u, v))
        elif kind in ("n", "x"):
            # node weights / extensions found in some benchmark files
            continue
        else:
            raise DimacsError(f"line {lineno}: unknown line type {kind!r}")
    if n is None:
        raise DimacsError("missing problem line 'p edge <n> <m>'")

    labels = None
    bad = [x for e in raw for x in e if not 1 <= x <= n]
    if bad:
        if not renumber:
            raise DimacsError(f"vertex id {bad[0]} outside 1..{n}")
        ids = sorted({x for e in raw for x in e})
        if len(ids) > n or ids[0] < 1:
            raise DimacsError(f"{len(ids)} distinct vertex ids exceed declared n={n}")
        # isolated padding vertices keep the declared count and have no label
        labels = tuple(ids) + (None,) * (n - len(ids))
        new_of = {x: i for i, x in enumerate(ids, 1)}
        raw = [(new_of[u], new_of[v]) for u, v in raw]

    g = Graph.from_edges(n, raw, labels)
    if declared_m is not None and declared_m != g.m:
        log.warning("declared %d edges, found %d distinct", declared_m, g.m)
    return g


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise DimacsError(f"line {lineno}: non-numeric token in {tokens!r}") from None


def write_dimacs(g: Graph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"c {line}" for line in comment.splitlines())
    out.append(f"p edge {g.n} {g.m}")
    out.extend(f"e {u} {v}" for u, v in g.sorted_edges())
    return "\n".join(out) + "\n"


def read_dimacs_file(path, **kw) -> Graph:
    with open(path) as fh:
        return parse_dimacs(fh, **kw)


# --------------------------------------------------------------------------
# random graphs

class XorShift64Star:
    """xorshift64* generator, seeded through splitmix64.

    State update: x ^= x >> 12; x ^= x << 25; x ^= x >> 27 (mod 2**64),
    output x * 0x2545F4914F6CDD1D (mod 2**64). Uniform floats take the top
    53 output bits. The seed is expanded by one splitmix64 step
    (z = seed + 0x9E3779B97F4A7C15; z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9;
    z = (z ^ z >> 27) * 0x94D049BB133111EB; z ^= z >> 31), with a zero result
    replaced by 1.
    """

    def __init__(self, seed: int):
        z = (seed + 0x9E3779B97F4A7C15) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        self.state = z or 1

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each pair (u, v), u < v, taken in lexicographic order, is an
    edge when the next uniform draw is below p."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    rng = XorShift64Star(seed)
    edges = [(u, v) for u, v in combinations(range(1, n + 1), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


# --------------------------------------------------------------------------
# named graphs

def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def empty_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def petersen_graph() -> Graph:
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def mycielskian(g: Graph) -> Graph:
    """Mycielski construction: copies n+1..2n of each vertex and a hub 2n+1."""
    n = g.n
    edges = list(g.edges)
    for u, v in g.edges:
        edges.append((u, v + n))
        edges.append((v, u + n))
    edges.extend((n + i, 2 * n + 1) for i in range(1, n + 1))
    return Graph.from_edges(2 * n + 1, edges)


def grotzsch_graph() -> Graph:
    return mycielskian(cycle_graph(5))
