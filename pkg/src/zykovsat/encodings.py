"""CNF encodings of k-colorability.

Assignment encoding: x(v, i) is true iff vertex v takes color i.

Zykov encoding: e(u, v) for every non-adjacent pair is true iff u and v
share a color (merged) and false iff they are separated (edge added).
Original edges behave as the constant false and never get a variable.
Transitivity over all triples makes the true pairs an equivalence relation;
c(v) marks vertices not merged with any lower-numbered vertex, and a
totalizer bounds how many c(v) are true.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_io import Graph, is_proper_coloring, nonedges
from .sat.totalizer import totalizer_at_most_k


class DecodeError(RuntimeError):
    """A model decoded to an improper coloring or too many colors."""


@dataclass
class CNF:
    nvars: int = 0
    clauses: list = field(default_factory=list)
    comments: list = field(default_factory=list)

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def add(self, clause) -> None:
        clause = list(clause)
        for x in clause:
            if abs(x) > self.nvars:
                self.nvars = abs(x)
        self.clauses.append(clause)

    def to_dimacs(self) -> str:
        out = [f"c {line}" for line in self.comments]
        out.append(f"p cnf {self.nvars} {len(self.clauses)}")
        out.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(out) + "\n"


class EdgeVarMap:
    """Bijection between non-edges {u, v} and consecutive SAT variables."""

    def __init__(self, g: Graph, first_var: int = 1):
        self.graph = g
        self.pairs = nonedges(g)
        self.first = first_var
        self.index = {p: first_var + i for i, p in enumerate(self.pairs)}

    def __len__(self):
        return len(self.pairs)

    @property
    def last(self) -> int:
        return self.first + len(self.pairs) - 1

    def var(self, u: int, v: int) -> int | None:
        """Variable of {u, v}, or None for an original edge (constant false)."""
        return self.index.get((u, v) if u < v else (v, u))

    def pair(self, var: int) -> tuple[int, int]:
        return self.pairs[var - self.first]

    def is_edge_var(self, var: int) -> bool:
        return self.first <= var <= self.last

    def vars(self) -> range:
        return range(self.first, self.first + len(self.pairs))


# --------------------------------------------------------------------------
# assignment encoding

def assignment_var(v: int, i: int, k: int) -> int:
    return (v - 1) * k + i


def build_assignment(g: Graph, k: int, clique=(), *, symmetry: bool = True) -> CNF:
    """Assignment encoding with optional symmetry breaking.

    Symmetry breaking fixes the sorted clique vertices c_1 < c_2 < ... to
    colors 1, 2, ... and lets the j-th vertex of the order (clique first,
    then the remaining vertices ascending) use only colors 1..j.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    cnf = CNF(nvars=g.n * k)
    cnf.comments.append(f"assignment encoding n={g.n} m={g.m} k={k}")
    cnf.comments.append("x(v,i) = (v-1)*k + i for v in 1..n, i in 1..k")
    clique = sorted(clique)
    if symmetry and len(clique) > k:
        cnf.add([])
        return cnf
    x = lambda v, i: (v - 1) * k + i  # noqa: E731
    for v in g.vertices:
        cnf.add([x(v, i) for i in range(1, k + 1)])
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                cnf.add([-x(v, i), -x(v, j)])
    for u, v in g.sorted_edges():
        for i in range(1, k + 1):
            cnf.add([-x(u, i), -x(v, i)])
    if symmetry:
        in_clique = set(clique)
        order = clique + [v for v in g.vertices if v not in in_clique]
        for pos, v in enumerate(order, 1):
            for i in range(pos + 1, k + 1):
                cnf.add([-x(v, i)])
        for j, c in enumerate(clique, 1):
            cnf.add([x(c, j)])
    return cnf


def decode_assignment_model(value, g: Graph, k: int) -> dict[int, int]:
    """``value(var) -> bool`` for the model; returns colors 1..k."""
    coloring = {}
    for v in g.vertices:
        cols = [i for i in range(1, k + 1) if value(assignment_var(v, i, k))]
        if not cols:
            raise DecodeError(f"vertex {v} has no color")
        coloring[v] = cols[0]
    if not is_proper_coloring(g, coloring):
        raise DecodeError("assignment model decodes to an improper coloring")
    return coloring


# --------------------------------------------------------------------------
# Zykov encoding

def transitivity_clauses(g: Graph, evars: EdgeVarMap) -> list[list[int]]:
    """All three rotations of transitivity for every triple u < v < w,
    simplified by the constant-false original edges."""
    out = []
    n = g.n
    var = evars.index
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            a = var.get((u, v))
            for w in range(v + 1, n + 1):
                b = var.get((v, w))
                c = var.get((u, w))
                for p, q, r in ((a, b, c), (a, c, b), (b, c, a)):
                    if p is None or q is None:
                        continue
                    out.append([-p, -q] if r is None else [-p, -q, r])
    return out


def color_marker_clauses(g: Graph, evars: EdgeVarMap, cvar) -> list[list[int]]:
    """c(v) <-> no lower-numbered vertex is merged with v."""
    out = []
    for v in g.vertices:
        lower = [e for e in (evars.var(u, v) for u in range(1, v)) if e is not None]
        for e in lower:
            out.append([-cvar(v), -e])
        out.append([cvar(v), *lower])
    return out


@dataclass
class ZykovCNF:
    cnf: CNF
    evars: EdgeVarMap
    cvars: list[int]
    outputs: list[int]


def build_full_zykov(g: Graph, k: int, *, enforce: bool = True, transitivity: bool = True) -> ZykovCNF:
    """Zykov encoding. Variables: e(u, v) in ``nonedges`` order, then c(1..n),
    then totalizer auxiliaries. With ``enforce=False`` the bound is left to
    an assumption on ``outputs[k]``; ``transitivity=False`` omits the cubic
    clause set for use with the propagator."""
    if k < 1:
        raise ValueError("k must be >= 1")
    evars = EdgeVarMap(g, 1)
    cnf = CNF(nvars=len(evars))
    cnf.comments.append(f"Zykov encoding n={g.n} m={g.m} k={k}")
    cnf.comments.append(f"e(u,v) = 1..{len(evars)} in lexicographic order of non-edges (u<v)")
    cvars = [cnf.new_var() for _ in g.vertices]
    if cvars:
        cnf.comments.append(f"c(v) = {cvars[0]}..{cvars[-1]} for v = 1..{g.n}")
    cnf.comments.append(f"totalizer auxiliaries from {cnf.nvars + 1}")
    if transitivity:
        for c in transitivity_clauses(g, evars):
            cnf.add(c)
    for c in color_marker_clauses(g, evars, lambda v: cvars[v - 1]):
        cnf.add(c)
    bound = min(k, g.n)
    tot, outputs = totalizer_at_most_k(cvars, bound, cnf.new_var, enforce=enforce)
    for c in tot:
        cnf.add(c)
    return ZykovCNF(cnf, evars, cvars, outputs)


def decode_zykov_model(value, g: Graph, k: int, evars: EdgeVarMap | None = None) -> dict[int, int]:
    """Color classes are the components of the true e(u, v) relation,
    numbered by their smallest vertex. ``value(var) -> bool``."""
    evars = evars or EdgeVarMap(g, 1)
    parent = list(range(g.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for var, (u, v) in zip(evars.vars(), evars.pairs):
        if value(var):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    color_of_root: dict[int, int] = {}
    coloring = {}
    for v in g.vertices:
        r = find(v)
        if r not in color_of_root:
            color_of_root[r] = len(color_of_root) + 1
        coloring[v] = color_of_root[r]
    if not is_proper_coloring(g, coloring):
        raise DecodeError("Zykov model merges adjacent vertices")
    if len(color_of_root) > k:
        raise DecodeError(f"Zykov model uses {len(color_of_root)} > {k} colors")
    return coloring
