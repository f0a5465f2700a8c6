"""External propagator over the Zykov variables.

The propagator keeps the graph H obtained from the input graph by applying
the currently assigned merges (e(u, v) true) and edge additions (e(u, v)
false). Every vertex belongs to a bag of merged vertices with a
representative; H has one vertex per representative. State changes go to an
undo journal so backtracking restores H exactly.

From H it derives:

* transitivity consequences of each merge or edge addition, each explained
  by a three-literal transitivity clause;
* prune clauses when a clique or Mycielskian witness in H needs more than k
  colors (guarded by the activation literal of the current budget);
* positive pruning: a k-clique Q plus a vertex v missing exactly one vertex
  u of Q forces u and v to merge;
* decision hints merging a dominated representative into its dominator.
"""

from __future__ import annotations

from collections import deque

from .bounds import (
    BoundWitness,
    bits,
    greedy_cliques,
    is_clique,
    mnts_clique,
    mycielskian_bound,
    verify_witness,
)
from .encodings import EdgeVarMap
from .graph_io import Graph
from .sat.solver import ContractViolation, ExternalPropagator


class ZykovPropagator(ExternalPropagator):
    """Transitivity and pruning propagator for one graph.

    ``order`` fixes the vertex order of the greedy clique heuristic (seed
    clique first, then e.g. a DSatur order); vertices missing from it are
    appended in id order. Pruning needs a budget set with ``set_budget``.
    """

    def __init__(self, g: Graph, evars: EdgeVarMap | None = None, *, order=(),
                 seed_clique=(), prune: bool = True, mnts: bool = True,
                 mycielski: bool = True, dominated: bool = True,
                 decision: str = "default", mnts_iters: int = 200,
                 mnts_depth: int = 25, seed: int = 0, debug: bool = False,
                 record_witnesses: bool = False, trace=None):
        if decision not in ("default", "clique"):
            raise ValueError(f"unknown decision strategy {decision!r}")
        self.g = g
        self.evars = evars or EdgeVarMap(g, 1)
        n = g.n
        self.n = n
        ev = [[0] * (n + 1) for _ in range(n + 1)]
        for (u, v), x in self.evars.index.items():
            ev[u][v] = ev[v][u] = x
        self.ev = ev
        self.pair_of = {x: p for p, x in self.evars.index.items()}
        self.n_evars = len(self.evars)

        self.prune = prune
        self.use_mnts = mnts
        self.use_mycielski = mycielski
        self.dominated = dominated
        self.decision = decision
        self.mnts_iters = mnts_iters
        self.mnts_depth = mnts_depth
        self.seed = seed
        self.debug = debug
        self.record_witnesses = record_witnesses
        self.trace = trace

        listed = set()
        base = []
        for v in (*seed_clique, *order, *g.vertices):
            if v not in listed:
                listed.add(v)
                base.append(v)
        self.base_order = base

        # merge state
        self.rep = list(range(n + 1))
        self.bagm = [0] + [1 << v for v in range(1, n + 1)]
        self.hadj = list(g.masks)
        self.alive = [(1 << (n + 1)) - 2]
        self.count = [0]
        self.val = [0] * (self.evars.last + 2)
        self.journal: list = []
        self.marks: list[int] = []
        self.snapshots: list = []

        self.queue: deque = deque()
        self.reasons: dict[int, list[int]] = {}
        self.pending: list[list[int]] = []
        self.dirty = True
        self.backtracked = False
        self.inconsistent = False
        self.grown = self.alive[0]
        self.last_clique: list[int] = []

        self.k: int | None = None
        self.act = 0
        self._mnts_calls = 0
        self.witnesses: list = []
        self.stats = dict(
            merges=0, separations=0, propagated=0, reasons=0,
            prune_clique=0, prune_mnts=0, prune_mycielski=0, prune_model=0,
            positive=0, hints=0, clique_decisions=0,
            clique_calls=0, mnts_calls=0, mycielski_calls=0,
        )

    # ------------------------------------------------------------------
    # wiring

    def attach(self, solver) -> None:
        """Connect to ``solver`` and observe every Zykov variable."""
        solver.ensure_vars(self.evars.last)
        solver.connect_propagator(self)
        for x in self.evars.vars():
            solver.add_observed_var(x)

    def set_budget(self, k: int, act: int, solver=None) -> None:
        """Prune against budget ``k`` while the activation literal ``act``
        is assigned false."""
        self.k = k
        self.act = act
        if act >= len(self.val):
            self.val.extend([0] * (act + 1 - len(self.val)))
        self.dirty = True
        if solver is not None:
            solver.add_observed_var(act)

    # ------------------------------------------------------------------
    # journal

    def _set(self, arr, i, x):
        self.journal.append((arr, i, arr[i]))
        arr[i] = x

    def notify_new_level(self) -> None:
        self.marks.append(len(self.journal))
        if self.debug:
            self.snapshots.append(self._snapshot())

    def notify_backtrack(self, level: int) -> None:
        if level >= len(self.marks):
            return
        mark = self.marks[level]
        journal = self.journal
        hadj = self.hadj
        grown = 0
        while len(journal) > mark:
            arr, i, old = journal.pop()
            arr[i] = old
            if arr is hadj:
                grown |= 1 << i
        del self.marks[level:]
        self.grown |= grown
        self.queue.clear()
        self.pending.clear()
        self.dirty = True
        self.backtracked = True
        self.inconsistent = False
        if self.debug:
            snap = self.snapshots[level]
            del self.snapshots[level:]
            if snap != self._snapshot():
                raise ContractViolation(f"state after backtrack to {level} differs from its snapshot")

    def _snapshot(self):
        return (tuple(self.rep), tuple(self.bagm), tuple(self.hadj), self.alive[0], self.count[0])

    # ------------------------------------------------------------------
    # assignments

    def notify_assign(self, lits) -> None:
        val = self.val
        pair_of = self.pair_of
        for lit in lits:
            x = abs(lit)
            self._set(val, x, 1 if lit > 0 else -1)
            if x == self.act:
                self.dirty = True
                continue
            p = pair_of.get(x)
            if p is None:
                continue
            if lit > 0:
                self._merge(p[0], p[1])
            else:
                self._separate(p[0], p[1])

    def _event(self):
        self._set(self.count, 0, self.count[0] + 1)
        if self.debug and self.count[0] > self.n_evars:
            raise ContractViolation("more state changes on one path than Zykov variables")
        self.dirty = True

    def _merge(self, u: int, v: int) -> None:
        rep, hadj, bagm, ev, val = self.rep, self.hadj, self.bagm, self.ev, self.val
        ru, rv = rep[u], rep[v]
        if ru == rv:
            return
        if hadj[ru] >> rv & 1:
            # the queued false literal for this pair reports the conflict
            self.inconsistent = True
            return
        self._event()
        self.stats["merges"] += 1
        q = self.queue
        U = bits(bagm[ru])
        V = bits(bagm[rv])
        euv = ev[u][v]
        # lift the merge to every cross pair of the two bags
        for v2 in V:
            if v2 != v:
                x = ev[u][v2]
                if val[x] != 1:
                    q.append((x, [-euv, -ev[v][v2], x]))
        for u2 in U:
            if u2 != u:
                x = ev[u2][v]
                if val[x] != 1:
                    q.append((x, [-ev[u2][u], -euv, x]))
        for u2 in U:
            if u2 == u:
                continue
            eu2u = ev[u2][u]
            for v2 in V:
                if v2 != v:
                    x = ev[u2][v2]
                    if val[x] != 1:
                        q.append((x, [-eu2u, -ev[u][v2], x]))
        # bags adjacent to only one side become adjacent to the other
        nu, nv = hadj[ru], hadj[rv]
        for w in bits(nv & ~nu):
            for w2 in bits(bagm[w]):
                evw = ev[v][w2]
                for u2 in U:
                    x = ev[u2][w2]
                    if x and val[x] != -1:
                        r = [-(ev[u2][v] if u2 != u else euv), -x]
                        if evw:
                            r.append(evw)
                        q.append((-x, r))
        for w in bits(nu & ~nv):
            for w2 in bits(bagm[w]):
                euw = ev[u][w2]
                for v2 in V:
                    x = ev[v2][w2]
                    if x and val[x] != -1:
                        r = [-(ev[u][v2] if v2 != v else euv), -x]
                        if euw:
                            r.append(euw)
                        q.append((-x, r))
        # union by size, lower representative on ties
        su, sv = len(U), len(V)
        keep, gone = (ru, rv) if su > sv or (su == sv and ru < rv) else (rv, ru)
        for x in bits(bagm[gone]):
            self._set(rep, x, keep)
        self._set(bagm, keep, bagm[keep] | bagm[gone])
        ng = hadj[gone]
        gbit, kbit = 1 << gone, 1 << keep
        for x in bits(ng):
            self._set(hadj, x, (hadj[x] & ~gbit) | kbit)
        self._set(hadj, keep, hadj[keep] | ng)
        self._set(self.alive, 0, self.alive[0] & ~gbit)
        self.grown |= kbit | ng
        if self.trace:
            self.trace(f"merge {u} {v} -> rep {keep}")

    def _separate(self, u: int, v: int) -> None:
        rep, hadj, bagm, ev, val = self.rep, self.hadj, self.bagm, self.ev, self.val
        ru, rv = rep[u], rep[v]
        if ru == rv:
            # the queued true literal for this pair reports the conflict
            self.inconsistent = True
            return
        if hadj[ru] >> rv & 1:
            return
        self._event()
        self.stats["separations"] += 1
        q = self.queue
        U = bits(bagm[ru])
        V = bits(bagm[rv])
        euv = ev[u][v]
        for v2 in V:
            if v2 != v:
                x = ev[u][v2]
                if x and val[x] != -1:
                    q.append((-x, [-ev[v][v2], euv, -x]))
        for u2 in U:
            if u2 != u:
                x = ev[u2][v]
                if x and val[x] != -1:
                    q.append((-x, [-ev[u2][u], euv, -x]))
        for u2 in U:
            if u2 == u:
                continue
            eu2u = ev[u2][u]
            for v2 in V:
                if v2 != v:
                    x = ev[u2][v2]
                    if x and val[x] != -1:
                        r = [-eu2u, -x]
                        y = ev[u][v2]
                        if y:
                            r.append(y)
                        q.append((-x, r))
        self._set(hadj, ru, hadj[ru] | 1 << rv)
        self._set(hadj, rv, hadj[rv] | 1 << ru)
        self.grown |= (1 << ru) | (1 << rv)
        if self.trace:
            self.trace(f"separate {u} {v}")

    # ------------------------------------------------------------------
    # propagation

    def cb_propagate(self) -> int:
        q = self.queue
        val = self.val
        while True:
            while q:
                lit, reason = q.popleft()
                x = abs(lit)
                s = 1 if lit > 0 else -1
                if val[x] == s:
                    continue
                if self.debug:
                    self._check_falsified(reason, lit)
                self.reasons[lit] = reason
                self.stats["propagated"] += 1
                return lit
            if self.pending or not self.dirty:
                return 0
            if self.debug and not self.inconsistent:
                self.verify_state()
            self.dirty = False
            self._check_prune()
            if not q:
                return 0

    def cb_add_reason(self, lit: int) -> list[int]:
        try:
            r = self.reasons[lit]
        except KeyError:
            raise ContractViolation(f"reason requested for {lit}, which was never propagated") from None
        self.stats["reasons"] += 1
        return list(r)

    def cb_add_external(self):
        if self.pending:
            return self.pending.pop(0)
        return None

    def _check_falsified(self, clause, target=None) -> None:
        val = self.val
        for lit in clause:
            if lit == target:
                continue
            if val[abs(lit)] != (-1 if lit > 0 else 1):
                raise ContractViolation(f"literal {lit} of {clause} is not false (target {target})")

    def _active(self) -> bool:
        return self.prune and self.k is not None and self.val[self.act] == -1

    def _order(self) -> list[int]:
        rep = self.rep
        seen = 0
        seq = []
        for v in self.base_order:
            r = rep[v]
            if not seen >> r & 1:
                seen |= 1 << r
                seq.append(r)
        return seq

    def current_clique(self) -> list[int]:
        self.stats["clique_calls"] += 1
        return greedy_cliques(self.hadj, self._order())

    def _check_prune(self) -> None:
        if not self._active():
            return
        k = self.k
        hadj = self.hadj
        clique = self.current_clique()
        if len(clique) > k:
            self._emit(BoundWitness.from_clique(clique[: k + 1]), "prune_clique")
            return
        if self.use_mnts:
            self.stats["mnts_calls"] += 1
            self._mnts_calls += 1
            alt = mnts_clique(hadj, self.alive[0], self.mnts_iters, self.mnts_depth,
                              seed=self.seed * 1000003 + self._mnts_calls)
            if len(alt) > k:
                self._emit(BoundWitness.from_clique(alt[: k + 1]), "prune_mnts")
                return
            if len(alt) > len(clique):
                clique = alt
        self.last_clique = clique
        if len(clique) != k:
            return
        if self.use_mycielski and self.backtracked:
            self.backtracked = False
            self.stats["mycielski_calls"] += 1
            w = mycielskian_bound(hadj, self.alive[0], BoundWitness.from_clique(clique), 1)
            if w.bound > k:
                self._emit(w, "prune_mycielski")
                return
        self._positive_prune(clique)

    def _emit(self, witness: BoundWitness, kind: str) -> None:
        ev = self.ev
        clause = [self.act]
        for a, b in sorted(witness.edges()):
            x = ev[a][b]
            if x:
                clause.append(x)
        if self.debug:
            if not verify_witness(self.hadj, witness):
                raise ContractViolation(f"bound witness {witness} fails its structural check")
            self._check_falsified(clause)
        if self.record_witnesses:
            self.witnesses.append((witness, verify_witness(self.hadj, witness), self.k))
        self.stats[kind] += 1
        self.pending.append(clause)
        if self.trace:
            self.trace(f"{kind} k={self.k} witness={witness.vertices()}")

    def _positive_prune(self, clique) -> None:
        ev, hadj, val = self.ev, self.hadj, self.val
        qm = 0
        for c in clique:
            qm |= 1 << c
        core = [self.act]
        for i, a in enumerate(clique):
            for b in clique[i + 1:]:
                if ev[a][b]:
                    core.append(ev[a][b])
        for v in bits(self.alive[0] & ~qm):
            miss = qm & ~hadj[v]
            if not miss or miss & (miss - 1):
                continue
            u = miss.bit_length() - 1
            x = ev[u][v]
            if not x or val[x] == 1:
                continue
            reason = core + [ev[v][w] for w in clique if w != u and ev[v][w]] + [x]
            self.queue.append((x, reason))
            self.stats["positive"] += 1
            if self.trace:
                self.trace(f"positive {u} {v}")

    # ------------------------------------------------------------------
    # decisions and models

    def cb_decide(self) -> int:
        hadj, alive, val, ev = self.hadj, self.alive[0], self.val, self.ev
        if self.dominated and self.grown:
            grown = self.grown & alive
            self.grown = 0
            best = None
            for u in bits(grown):
                nu = hadj[u]
                for v in bits(alive & ~nu & ~(1 << u)):
                    nv = hadj[v]
                    if not nu & ~nv or not nv & ~nu:
                        p = (u, v) if u < v else (v, u)
                        if best is None or p < best:
                            best = p
                        break
            if best is not None:
                x = ev[best[0]][best[1]]
                if x and val[x] == 0:
                    self.stats["hints"] += 1
                    return x
        if self.decision == "clique" and self.last_clique:
            qm = 0
            for c in self.last_clique:
                qm |= 1 << c
            if qm & alive == qm:
                best_v, best_cnt = 0, -1
                for v in bits(alive & ~qm):
                    cnt = (hadj[v] & qm).bit_count()
                    if cnt > best_cnt and qm & ~hadj[v]:
                        best_v, best_cnt = v, cnt
                if best_v:
                    free = qm & ~hadj[best_v]
                    q = (free & -free).bit_length() - 1
                    x = ev[best_v][q]
                    if x and val[x] == 0:
                        self.stats["clique_decisions"] += 1
                        return x
        return 0

    def cb_check_found_model(self, model) -> bool:
        if self.debug:
            self.verify_state()
        if not self._active():
            return True
        alive = bits(self.alive[0])
        if len(alive) <= self.k:
            return True
        if not is_clique(self.hadj, alive):
            raise ContractViolation("complete assignment left H incomplete")
        self._emit(BoundWitness.from_clique(alive[: self.k + 1]), "prune_model")
        return False

    # ------------------------------------------------------------------
    # introspection

    def bags(self) -> list[list[int]]:
        return [bits(self.bagm[r]) for r in bits(self.alive[0])]

    def verify_state(self) -> None:
        """Rebuild H from the assigned literals and compare with the
        incrementally maintained state."""
        n = self.n
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        val = self.val
        for x, (u, v) in self.pair_of.items():
            if val[x] == 1:
                a, b = find(u), find(v)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        classes = {}
        for v in range(1, n + 1):
            classes.setdefault(find(v), 0)
            classes[find(v)] |= 1 << v
        mine = {self.bagm[r] for r in bits(self.alive[0])}
        if mine != set(classes.values()):
            raise ContractViolation("bags differ from the closure of assigned merges")
        want = {}
        for v in range(1, n + 1):
            want.setdefault(self.rep[v], 0)
        edges = set()
        for u, v in self.g.edges:
            edges.add(frozenset((self.rep[u], self.rep[v])))
        for x, (u, v) in self.pair_of.items():
            if val[x] == -1:
                edges.add(frozenset((self.rep[u], self.rep[v])))
        for r in bits(self.alive[0]):
            m = 0
            for e in edges:
                if r in e:
                    (o,) = e - {r}
                    m |= 1 << o
            if m != self.hadj[r]:
                raise ContractViolation(f"H adjacency of {r} differs from reconstruction")
