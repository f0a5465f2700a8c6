"""Chromatic-number preserving reductions and coloring recovery.

Two rules run to a fixpoint: drop vertices of degree below the lower bound,
then drop dominated vertices (open neighborhood contained in that of a
non-adjacent vertex). Adjacent vertices can never dominate each other under
open neighborhoods, so only non-adjacent pairs are tested.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .graph_io import Graph


@dataclass(frozen=True)
class LowDegree:
    vertex: int
    neighbors: tuple[int, ...]


@dataclass(frozen=True)
class Dominated:
    vertex: int
    dominator: int


Record = Union[LowDegree, Dominated]


class PaletteExhausted(RuntimeError):
    """Raised when a low-degree vertex finds no free color while recovering."""


@dataclass
class ReductionLog:
    """Removal records in removal order, plus the id map of the reduced graph
    (``kept[i - 1]`` is the original id of reduced vertex i)."""

    records: list
    kept: list[int]

    def __len__(self):
        return len(self.records)


def reduce(g: Graph, lb: int) -> tuple[Graph, ReductionLog]:
    nbrs = {v: set(g.adj[v]) for v in g.vertices}
    records: list[Record] = []

    def remove(v):
        for w in nbrs[v]:
            nbrs[w].discard(v)
        del nbrs[v]

    changed = True
    while changed:
        changed = False
        # low-degree pass
        again = True
        while again:
            again = False
            for v in sorted(nbrs):
                if v in nbrs and len(nbrs[v]) < lb:
                    records.append(LowDegree(v, tuple(sorted(nbrs[v]))))
                    remove(v)
                    again = changed = True
        # domination pass
        again = True
        while again:
            again = False
            for u, v in _dominated_pairs(nbrs):
                if u in nbrs and v in nbrs and v not in nbrs[u] and nbrs[u] <= nbrs[v]:
                    records.append(Dominated(u, v))
                    remove(u)
                    again = changed = True

    kept = sorted(nbrs)
    reduced, _ = g.induced(kept)
    return reduced, ReductionLog(records, kept)


def _dominated_pairs(nbrs):
    """Candidate (dominated, dominator) pairs, non-adjacent with
    deg(u) <= deg(v). On equal neighborhoods the higher id is removed."""
    verts = sorted(nbrs)
    for u in verts:
        nu = nbrs.get(u)
        if nu is None:
            continue
        du = len(nu)
        if nu:
            # a dominator shares every neighbor of u, in particular the rarest one
            pivot = min(nu, key=lambda x: len(nbrs[x]))
            cands = sorted(nbrs[pivot])
        else:
            cands = verts
        for v in cands:
            if v == u or v not in nbrs or v in nu:
                continue
            nv = nbrs[v]
            if du > len(nv):
                continue
            if du == len(nv) and nu == nv and u < v:
                # mutual domination: keep the lower id
                continue
            if nu <= nv:
                yield u, v
                break


def recover(log: ReductionLog, coloring: dict[int, int], k: int) -> dict[int, int]:
    """Extend a coloring of the reduced graph (reduced ids) to the original
    graph (original ids), using colors 1..max(k, colors in use)."""
    out = {log.kept[v - 1]: c for v, c in coloring.items()}
    palette = max([k, *out.values()]) if out else k
    for rec in reversed(log.records):
        if isinstance(rec, Dominated):
            out[rec.vertex] = out[rec.dominator]
        else:
            taken = {out[w] for w in rec.neighbors}
            for c in range(1, palette + 1):
                if c not in taken:
                    out[rec.vertex] = c
                    break
            else:
                raise PaletteExhausted(
                    f"vertex {rec.vertex} sees all {palette} colors; lower bound was invalid"
                )
    return out
