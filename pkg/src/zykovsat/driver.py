"""Chromatic number and k-colorability pipelines.

Bounds and reductions run first; the remaining decision problems go to one
of four engines:

* ``zykov``: Zykov variables, transitivity and pruning in the propagator;
* ``transitivity-only``: the propagator without pruning, color budget
  enforced by c(v) clauses and a totalizer;
* ``full-zykov``: the complete Zykov CNF, no propagator;
* ``assignment``: the assignment encoding with symmetry breaking.

In incremental mode a single solver serves every budget. Prune clauses for
budget k carry an activation literal s_k; solving budget k assumes s_k false
and, bottom-up, every earlier s_j true so their clauses are switched off.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .bounds import BoundWitness, dsatur, greedy_cliques, mnts_clique, mycielskian_bound
from .encodings import (
    EdgeVarMap,
    build_assignment,
    color_marker_clauses,
    decode_assignment_model,
    decode_zykov_model,
    transitivity_clauses,
)
from .graph_io import Graph, is_proper_coloring, num_colors
from .preprocess import recover, reduce
from .propagator import ZykovPropagator
from .sat.solver import ContractViolation, Solver, Status
from .sat.totalizer import totalizer_at_most_k

log = logging.getLogger(__name__)

MODES = ("zykov", "assignment", "full-zykov", "transitivity-only")
SEARCHES = ("bottom-up", "top-down")
DECISIONS = ("default", "clique")


@dataclass
class SolveConfig:
    mode: str = "zykov"
    search: str = "bottom-up"
    incremental: bool = True
    mnts: bool = True
    dominated: bool = True
    decision: str = "default"
    preprocess: bool = True
    time_limit: float | None = None
    conflict_limit: int | None = None
    seed: int = 0
    debug: bool = False
    record_witnesses: bool = False
    root_mnts_iters: int = 10000
    root_mnts_depth: int = 100

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.search not in SEARCHES:
            raise ValueError(f"search must be one of {SEARCHES}")
        if self.decision not in DECISIONS:
            raise ValueError(f"decision must be one of {DECISIONS}")

    @property
    def pruning(self) -> bool:
        return self.mode == "zykov"

    def flags(self) -> str:
        out = []
        if self.search == "top-down":
            out.append("top-down")
        if not self.incremental:
            out.append("non-incremental")
        if not self.mnts:
            out.append("no-mnts")
        if not self.dominated:
            out.append("no-dominated")
        if self.decision != "default":
            out.append(f"decision-{self.decision}")
        if not self.preprocess:
            out.append("no-preprocess")
        return "+".join(out) or "default"


@dataclass
class KStep:
    k: int
    result: str
    seconds: float
    conflicts: int


@dataclass
class SolveReport:
    status: str                       # solved | timeout
    chi: int | None
    lb: int
    ub: int
    coloring: dict
    steps: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    root_witness: BoundWitness | None = None
    witnesses: list = field(default_factory=list)
    reduced_n: int = 0
    reduced_m: int = 0
    seconds: float = 0.0

    @property
    def solved(self) -> bool:
        return self.status == "solved"


@dataclass
class DecideResult:
    status: str                       # SAT | UNSAT | UNKNOWN
    coloring: dict | None = None
    stats: dict = field(default_factory=dict)


STAT_KEYS = (
    "decisions", "conflicts", "propagations", "restarts", "ext_propagations",
    "ext_reasons", "ext_clauses", "ext_decisions",
    "merges", "separations", "positive", "hints", "clique_decisions",
    "prune_clique", "prune_mnts", "prune_mycielski", "prune_model",
    "clique_calls", "mnts_calls", "mycielski_calls",
)


def _empty_stats() -> dict:
    return {key: 0 for key in STAT_KEYS}


# --------------------------------------------------------------------------
# engines

class _Engine:
    """One solver (plus propagator) answering budget queries on graph g."""

    def __init__(self, g: Graph, cfg: SolveConfig, kmax: int, order, clique):
        self.g = g
        self.cfg = cfg
        self.kmax = kmax
        self.order = order
        self.clique = list(clique)
        self.solver: Solver | None = None
        self.prop: ZykovPropagator | None = None
        self.outputs: list[int] = []
        self.acts: dict[int, int] = {}
        self.asked: list[int] = []
        self.last_k: int | None = None
        self._done_stats = _empty_stats()
        if cfg.mode != "assignment":
            self._build_zykov()

    def _build_zykov(self):
        cfg, g = self.cfg, self.g
        s = Solver(debug=cfg.debug)
        evars = EdgeVarMap(g, 1)
        s.ensure_vars(evars.last)
        self.evars = evars
        if cfg.mode in ("zykov", "transitivity-only"):
            p = ZykovPropagator(
                g, evars, order=self.order, seed_clique=self.clique,
                prune=cfg.pruning, mnts=cfg.mnts, dominated=cfg.dominated,
                decision=cfg.decision, seed=cfg.seed, debug=cfg.debug,
                record_witnesses=cfg.record_witnesses,
            )
            p.attach(s)
            self.prop = p
        if cfg.mode == "full-zykov":
            for c in transitivity_clauses(g, evars):
                s.add_clause(c)
        if cfg.mode in ("full-zykov", "transitivity-only"):
            cvars = [s.new_var() for _ in g.vertices]
            for c in color_marker_clauses(g, evars, lambda v: cvars[v - 1]):
                s.add_clause(c)
            bound = min(self.kmax, g.n)
            clauses, self.outputs = totalizer_at_most_k(cvars, bound, s.new_var, enforce=False)
            for c in clauses:
                s.add_clause(c)
        self.solver = s

    def decide(self, k: int, conflict_limit=None, deadline=None):
        """Returns (Status, coloring of g or None)."""
        if self.cfg.mode == "assignment":
            return self._decide_assignment(k, conflict_limit, deadline)
        s = self.solver
        assumptions = []
        if self.prop is not None and self.cfg.pruning:
            act = s.new_var()
            self.acts[k] = act
            self.prop.set_budget(k, act, s)
            assumptions.append(-act)
            for j in self.asked:
                if self.cfg.search == "bottom-up":
                    # earlier, smaller budgets: their prune clauses are switched off
                    assumptions.append(self.acts[j])
                    s.disabled_vars.add(self.acts[j])
                else:
                    # larger budgets prune validly for a smaller one too
                    assumptions.append(-self.acts[j])
        if self.outputs:
            if k < len(self.outputs):
                assumptions.append(-self.outputs[k])
        self.asked.append(k)
        st = s.solve(assumptions, conflict_limit=conflict_limit, deadline=deadline)
        coloring = None
        if st == Status.SAT:
            model = s.model
            coloring = decode_zykov_model(lambda x: model[x - 1] > 0, self.g, k, self.evars)
        return st, coloring

    def _decide_assignment(self, k, conflict_limit, deadline):
        g = self.g
        self._fold_stats()
        s = Solver(debug=self.cfg.debug)
        self.solver = s
        if k < 1:
            return (Status.SAT if g.n == 0 else Status.UNSAT), ({} if g.n == 0 else None)
        cnf = build_assignment(g, k, self.clique)
        s.ensure_vars(cnf.nvars)
        for c in cnf.clauses:
            if not s.add_clause(c):
                break
        st = s.solve(conflict_limit=conflict_limit, deadline=deadline)
        coloring = None
        if st == Status.SAT:
            model = s.model
            coloring = decode_assignment_model(lambda x: model[x - 1] > 0, g, k)
        return st, coloring

    def _fold_stats(self):
        if self.solver is not None:
            for key, v in self.solver.stats.as_dict().items():
                if key in self._done_stats:
                    self._done_stats[key] += v
            self.solver = None

    def stats(self) -> dict:
        out = dict(self._done_stats)
        if self.solver is not None:
            for key, v in self.solver.stats.as_dict().items():
                if key in out:
                    out[key] += v
        if self.prop is not None:
            for key, v in self.prop.stats.items():
                if key in out:
                    out[key] += v
        return out

    def conflicts(self) -> int:
        return self.stats()["conflicts"]


def _add_stats(total: dict, part: dict) -> None:
    for key, v in part.items():
        total[key] = total.get(key, 0) + v


# --------------------------------------------------------------------------
# bounds

def root_bounds(g: Graph, cfg: SolveConfig):
    """Initial clique, Mycielskian extension and DSatur coloring."""
    coloring, order = dsatur(g)
    ub = num_colors(coloring)
    adj, verts = g.masks, (1 << (g.n + 1)) - 2
    clique = greedy_cliques(adj, order)
    if len(clique) < ub:
        alt = mnts_clique(adj, verts, cfg.root_mnts_iters, cfg.root_mnts_depth,
                          seed=cfg.seed, target=ub)
        if len(alt) > len(clique):
            clique = alt
    witness = BoundWitness.from_clique(sorted(clique))
    if clique and len(clique) < ub:
        witness = mycielskian_bound(adj, verts, witness, max_rounds=g.n)
    return witness, coloring, order


def _reduced_clique(rg: Graph, kept: list[int], clique, order) -> tuple[list[int], list[int]]:
    new_id = {v: i for i, v in enumerate(kept, 1)}
    mapped = [new_id[v] for v in clique if v in new_id]
    rorder = [new_id[v] for v in order if v in new_id]
    best = greedy_cliques(rg.masks, rorder, mapped)
    return sorted(best), rorder


# --------------------------------------------------------------------------
# public API

def solve_chromatic(g: Graph, cfg: SolveConfig | None = None) -> SolveReport:
    cfg = cfg or SolveConfig()
    t0 = time.monotonic()
    deadline = t0 + cfg.time_limit if cfg.time_limit is not None else None
    if g.n == 0:
        return SolveReport("solved", 0, 0, 0, {}, seconds=time.monotonic() - t0)

    witness, ub_col, order = root_bounds(g, cfg)
    lb = witness.bound
    if cfg.preprocess:
        rg, rlog = reduce(g, lb)
    else:
        rg, rlog = reduce(g, 0)
    rcol, rorder = dsatur(rg)
    alt = recover(rlog, rcol, lb)
    if num_colors(alt) < num_colors(ub_col):
        ub_col = alt
    ub = num_colors(ub_col)
    stats = _empty_stats()
    report = SolveReport("solved", None, lb, ub, ub_col, root_witness=witness,
                         reduced_n=rg.n, reduced_m=rg.m, stats=stats)
    if lb > ub:
        raise ContractViolation(f"lower bound {lb} exceeds upper bound {ub}")
    if lb == ub:
        report.chi = ub
        report.seconds = time.monotonic() - t0
        return report

    rclique, rorder = _reduced_clique(rg, rlog.kept, witness.base, order)
    engine = None
    used = 0

    def run(k):
        nonlocal engine, used
        if engine is None or not cfg.incremental:
            if engine is not None:
                _add_stats(stats, engine.stats())
            engine = _Engine(rg, cfg, ub - 1, rorder, rclique)
            base_conflicts = 0
        else:
            base_conflicts = engine.conflicts()
        limit = None
        if cfg.conflict_limit is not None:
            limit = cfg.conflict_limit - used
            if limit <= 0:
                return Status.UNKNOWN, None
        if deadline is not None and time.monotonic() >= deadline:
            return Status.UNKNOWN, None
        tk = time.monotonic()
        st, col = engine.decide(k, conflict_limit=limit, deadline=deadline)
        spent = engine.conflicts() - base_conflicts
        used += spent
        report.steps.append(KStep(k, st.name, time.monotonic() - tk, spent))
        if col is not None:
            col = recover(rlog, col, k)
            if not is_proper_coloring(g, col) or num_colors(col) > k:
                raise ContractViolation(f"budget {k} model does not give a proper {k}-coloring")
        return st, col

    if cfg.search == "bottom-up":
        for k in range(lb, ub):
            st, col = run(k)
            if st == Status.UNKNOWN:
                report.status = "timeout"
                break
            if st == Status.SAT:
                report.ub, report.coloring = num_colors(col), col
                report.chi = k
                break
            report.lb = k + 1
        else:
            report.chi = ub
    else:
        k = ub - 1
        while k >= lb:
            st, col = run(k)
            if st == Status.UNKNOWN:
                report.status = "timeout"
                break
            if st == Status.UNSAT:
                report.lb = k + 1
                break
            report.ub, report.coloring = num_colors(col), col
            k = report.ub - 1
        if report.status == "solved":
            report.chi = report.ub
    if report.status == "solved" and report.lb != report.ub:
        report.lb = report.ub = report.chi
    _check_monotone(report.steps, cfg.search)
    if engine is not None:
        _add_stats(stats, engine.stats())
        if engine.prop is not None and cfg.record_witnesses:
            report.witnesses.extend(engine.prop.witnesses)
    report.seconds = time.monotonic() - t0
    return report


def _check_monotone(steps, search: str) -> None:
    """Over increasing k answers must read UNSAT... then SAT...."""
    seq = sorted((s.k, s.result) for s in steps if s.result != "UNKNOWN")
    seen_sat = False
    for k, r in seq:
        if r == "SAT":
            seen_sat = True
        elif seen_sat:
            raise ContractViolation(f"budget {k} is UNSAT after a smaller budget was SAT ({search})")


def decide_k(g: Graph, k: int, cfg: SolveConfig | None = None) -> DecideResult:
    """Is g k-colorable? SAT results carry a verified coloring of g."""
    cfg = cfg or SolveConfig()
    if k < 1:
        raise ValueError("k must be >= 1")
    deadline = time.monotonic() + cfg.time_limit if cfg.time_limit is not None else None
    if k >= g.n:
        return DecideResult("SAT", {v: i for i, v in enumerate(g.vertices, 1)})
    _, order = dsatur(g)
    clique = greedy_cliques(g.masks, order)
    if len(clique) <= k and cfg.mode != "assignment":
        alt = mnts_clique(g.masks, (1 << (g.n + 1)) - 2, cfg.root_mnts_iters,
                          cfg.root_mnts_depth, seed=cfg.seed, target=k + 1)
        if len(alt) > len(clique):
            clique = alt
    if len(clique) > k:
        return DecideResult("UNSAT")
    rg, rlog = reduce(g, k) if cfg.preprocess else reduce(g, 0)
    if rg.n == 0:
        col = recover(rlog, {}, k)
        return DecideResult("SAT", col)
    rclique, rorder = _reduced_clique(rg, rlog.kept, clique, order)
    engine = _Engine(rg, cfg, k, rorder, rclique)
    st, col = engine.decide(k, conflict_limit=cfg.conflict_limit, deadline=deadline)
    stats = engine.stats()
    if st == Status.SAT:
        col = recover(rlog, col, k)
        if not is_proper_coloring(g, col) or num_colors(col) > k:
            raise ContractViolation("decision model does not give a proper coloring")
        return DecideResult("SAT", col, stats)
    return DecideResult(st.name, None, stats)
