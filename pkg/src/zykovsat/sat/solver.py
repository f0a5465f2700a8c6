"""A CDCL SAT solver with assumptions and an external propagator hook.

Public literals are nonzero ints in DIMACS style (``-3`` is the negation of
variable 3). Internally literal ``x`` is coded as ``2*|x| + (x < 0)``.

Search: two-watched-literal propagation, first-UIP learning with recursive
minimization, activity branching (decay 0.95) with phase saving, Luby
restarts (unit 64 conflicts) and LBD-based learnt clause reduction.

An attached :class:`ExternalPropagator` is notified of assignments to the
variables it observes, of new decision levels and of backtracking. It may
propagate literals with lazily supplied reasons, add clauses at any time,
suggest decisions, and veto complete assignments.
"""

from __future__ import annotations

import enum
import heapq
import time
from dataclasses import dataclass, field


class Status(enum.Enum):
    SAT = 10
    UNSAT = 20
    UNKNOWN = 0


class ContractViolation(AssertionError):
    """A propagator or solver invariant failed a runtime check."""


class ExternalPropagator:
    """Callback surface; every hook defaults to doing nothing."""

    def notify_assign(self, lits: list[int]) -> None:
        pass

    def notify_new_level(self) -> None:
        pass

    def notify_backtrack(self, level: int) -> None:
        pass

    def cb_propagate(self) -> int:
        return 0

    def cb_add_reason(self, lit: int) -> list[int]:
        raise NotImplementedError

    def cb_decide(self) -> int:
        return 0

    def cb_add_external(self) -> list[int] | None:
        return None

    def cb_check_found_model(self, model: list[int]) -> bool:
        return True


class Clause:
    __slots__ = ("lits", "learnt", "lbd", "deleted")

    def __init__(self, lits, learnt=False, lbd=0):
        self.lits = lits
        self.learnt = learnt
        self.lbd = lbd
        self.deleted = False

    def __repr__(self):
        return f"Clause({[_dec(x) for x in self.lits]})"


EXT = Clause([])  # reason marker for external propagations not yet explained


def _enc(lit: int) -> int:
    return lit << 1 if lit > 0 else ((-lit) << 1) | 1


def _dec(code: int) -> int:
    return -(code >> 1) if code & 1 else code >> 1


def luby(i: int) -> int:
    """i-th element (from 0) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


@dataclass
class SolverStats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    restarts: int = 0
    learnt_literals: int = 0
    ext_propagations: int = 0
    ext_reasons: int = 0
    ext_clauses: int = 0
    ext_decisions: int = 0
    reductions: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class Solver:
    def __init__(self, *, debug: bool = False, default_phase: bool = True,
                 restart_unit: int = 64, decay: float = 0.95):
        self.debug = debug
        self.default_phase = default_phase
        self.restart_unit = restart_unit
        self.decay = decay

        self.nvars = 0
        self.vals = [0, 0]
        self.level = [0]
        self.reason: list = [None]
        self.activity = [0.0]
        self.polarity = [True]
        self.seen = bytearray(1)
        self.observed = bytearray(1)
        self.watches: list[list[Clause]] = [[], []]

        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.notified = 0

        self.clauses: list[Clause] = []
        self.learnts: list[Clause] = []
        self.external_log: list[tuple] = []
        self.heap: list = []
        self.var_inc = 1.0
        self.ok = True

        self.prop: ExternalPropagator | None = None
        self.stats = SolverStats()
        self.model: list[int] | None = None
        self.core: list[int] = []
        self.disabled_vars: set[int] = set()

        self._next_reduce = 2000
        self._reduce_step = 300

    # ------------------------------------------------------------------
    # setup

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self.vals += [0, 0]
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.polarity.append(self.default_phase)
        self.seen.append(0)
        self.observed.append(0)
        self.watches += [[], []]
        heapq.heappush(self.heap, (-0.0, v))
        return v

    def ensure_vars(self, n: int) -> None:
        while self.nvars < n:
            self.new_var()

    def connect_propagator(self, prop: ExternalPropagator) -> None:
        if self.prop is not None:
            raise RuntimeError("a propagator is already connected")
        self.prop = prop

    def add_observed_var(self, var: int) -> None:
        self.ensure_vars(var)
        if self.observed[var]:
            return
        self.observed[var] = 1
        s = self.vals[var << 1]
        if s != 0 and self.prop is not None:
            # already fixed at level 0: report it once, out of band
            self.prop.notify_assign([var if s == 1 else -var])

    def add_clause(self, lits) -> bool:
        """Add a permanent clause. Returns False once the formula is known UNSAT."""
        if not self.ok:
            return False
        self._backtrack(0)
        codes = self._normalize(lits)
        if codes is None:
            return True
        vals = self.vals
        if any(vals[c] == 1 for c in codes):
            return True
        codes = [c for c in codes if vals[c] == 0]
        if not codes:
            self.ok = False
            return False
        if len(codes) == 1:
            self._assign(codes[0], None)
            return True
        c = Clause(codes)
        self._attach(c)
        self.clauses.append(c)
        return True

    def _normalize(self, lits):
        out = []
        present = set()
        for x in lits:
            if x == 0:
                raise ValueError("0 is not a literal")
            self.ensure_vars(abs(x))
            c = _enc(x)
            if c ^ 1 in present:
                return None
            if c not in present:
                present.add(c)
                out.append(c)
        return out

    # ------------------------------------------------------------------
    # queries

    def value(self, lit: int) -> bool | None:
        if self.model is not None:
            v = abs(lit)
            if v > len(self.model):
                return None
            val = self.model[v - 1] > 0
            return val if lit > 0 else not val
        s = self.vals[_enc(lit)]
        return None if s == 0 else s == 1

    def decision_level(self) -> int:
        return len(self.trail_lim)

    # ------------------------------------------------------------------
    # core machinery

    def _assign(self, code: int, reason) -> None:
        v = code >> 1
        self.vals[code] = 1
        self.vals[code ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(code)

    def _attach(self, c: Clause) -> None:
        self.watches[c.lits[0]].append(c)
        self.watches[c.lits[1]].append(c)

    def _new_level(self) -> None:
        self.trail_lim.append(len(self.trail))
        if self.prop is not None:
            self.prop.notify_new_level()

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        trail = self.trail
        vals = self.vals
        reason = self.reason
        polarity = self.polarity
        activity = self.activity
        heap = self.heap
        for i in range(len(trail) - 1, start - 1, -1):
            code = trail[i]
            v = code >> 1
            vals[code] = 0
            vals[code ^ 1] = 0
            reason[v] = None
            polarity[v] = not code & 1
            heapq.heappush(heap, (-activity[v], v))
        del trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = start
        if self.notified > start:
            self.notified = start
        if self.prop is not None:
            self.prop.notify_backtrack(lvl)

    def _bcp(self):
        trail = self.trail
        vals = self.vals
        watches = self.watches
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        qhead = self.qhead
        props = 0
        confl = None
        while qhead < len(trail):
            false_lit = trail[qhead] ^ 1
            qhead += 1
            ws = watches[false_lit]
            n = len(ws)
            i = j = 0
            while i < n:
                c = ws[i]
                i += 1
                if c.deleted:
                    continue
                lits = c.lits
                if lits[0] == false_lit:
                    lits[0] = lits[1]
                    lits[1] = false_lit
                first = lits[0]
                if vals[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(lits)):
                    lk = lits[k]
                    if vals[lk] != -1:
                        lits[1] = lk
                        lits[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if vals[first] == -1:
                        confl = c
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                    else:
                        vals[first] = 1
                        vals[first ^ 1] = -1
                        v = first >> 1
                        level[v] = lvl
                        reason[v] = c
                        trail.append(first)
                        props += 1
            del ws[j:]
            if confl is not None:
                break
        self.qhead = qhead
        self.stats.propagations += props
        return confl

    def _notify(self) -> None:
        trail = self.trail
        obs = self.observed
        batch = [_dec(c) for c in trail[self.notified:] if obs[c >> 1]]
        self.notified = len(trail)
        if batch:
            self.prop.notify_assign(batch)

    def _propagate(self):
        prop = self.prop
        vals = self.vals
        while True:
            confl = self._bcp()
            if confl is not None:
                return confl
            if prop is None:
                return None
            if self.notified < len(self.trail):
                self._notify()
            lit = prop.cb_propagate()
            if lit:
                code = _enc(lit)
                s = vals[code]
                if s == 0:
                    self._assign(code, EXT)
                    self.stats.ext_propagations += 1
                elif s == -1:
                    lits = self._fetch_reason(lit, conflicting=True)
                    confl = self._add_clause_in_search(lits, learnt=True)
                    if confl is not None:
                        return confl
                continue
            ext = prop.cb_add_external()
            if ext is not None:
                self.stats.ext_clauses += 1
                if self.debug:
                    self.external_log.append(tuple(ext))
                confl = self._add_clause_in_search(ext, learnt=True)
                if confl is not None:
                    return confl
                continue
            return None

    def _fetch_reason(self, lit: int, conflicting: bool = False) -> list[int]:
        self.stats.ext_reasons += 1
        lits = list(self.prop.cb_add_reason(lit))
        if self.debug:
            self.external_log.append(tuple(lits))
            self._check_reason(lit, lits, conflicting)
        return lits

    def _check_reason(self, lit, lits, conflicting):
        if lit not in lits:
            raise ContractViolation(f"reason for {lit} does not contain it: {lits}")
        for x in lits:
            s = self.vals[_enc(x)]
            if x == lit:
                want = -1 if conflicting else 1
                if s != want:
                    raise ContractViolation(f"reason target {lit} has value {s}")
            elif s != -1:
                raise ContractViolation(f"reason {lits} for {lit}: literal {x} is not false")

    def _reason_of(self, v: int):
        r = self.reason[v]
        if r is EXT:
            code = v << 1 if self.vals[v << 1] == 1 else (v << 1) | 1
            lits = self._fetch_reason(_dec(code))
            codes = self._normalize(lits)
            codes.remove(code)
            codes.insert(0, code)
            r = Clause(codes, learnt=True, lbd=len({self.level[c >> 1] for c in codes}))
            if len(codes) > 1:
                level = self.level
                best = max(range(1, len(codes)), key=lambda i: level[codes[i] >> 1])
                codes[1], codes[best] = codes[best], codes[1]
                self._attach(r)
                self.learnts.append(r)
            self.reason[v] = r
        return r

    def _add_clause_in_search(self, lits, learnt: bool):
        """Integrate a clause arriving mid-search. Returns a conflict clause
        if the clause is falsified at its highest level, else None."""
        codes = self._normalize(lits)
        if codes is None:
            return None
        vals = self.vals
        level = self.level
        codes = [c for c in codes if not (vals[c] == -1 and level[c >> 1] == 0)]
        if any(vals[c] == 1 and level[c >> 1] == 0 for c in codes):
            return None
        if not codes:
            self.ok = False
            return Clause([])
        if len(codes) == 1:
            self._backtrack(0)
            self._assign(codes[0], None)
            return None

        def key(c):
            s = vals[c]
            if s == 1:
                return (0, 0)
            if s == 0:
                return (1, 0)
            return (2, -level[c >> 1])

        codes.sort(key=key)
        c = Clause(codes, learnt=learnt, lbd=len({level[x >> 1] for x in codes}))
        s0, s1 = vals[codes[0]], vals[codes[1]]
        if s0 == 1 or s1 != -1:
            self._attach(c)
            self._store(c)
            return None
        if s0 == 0:
            self._backtrack(level[codes[1] >> 1])
            self._attach(c)
            self._store(c)
            self._assign(codes[0], c)
            return None
        l1 = level[codes[0] >> 1]
        l2 = level[codes[1] >> 1]
        if l1 > l2:
            self._backtrack(l2)
            self._attach(c)
            self._store(c)
            self._assign(codes[0], c)
            return None
        self._backtrack(l1)
        self._attach(c)
        self._store(c)
        return c

    def _store(self, c: Clause) -> None:
        (self.learnts if c.learnt else self.clauses).append(c)

    # ------------------------------------------------------------------
    # conflict analysis

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for i in range(1, self.nvars + 1):
                act[i] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[i], i) for i in range(1, self.nvars + 1) if self.vals[i << 1] == 0]
            heapq.heapify(self.heap)
        elif self.vals[v << 1] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _check_used(self, c: Clause, implied) -> None:
        vals = self.vals
        for x in c.lits:
            if x == implied:
                continue
            if vals[x] != -1:
                raise ContractViolation(f"clause {c} used in analysis has non-false {_dec(x)}")
            if (x >> 1) in self.disabled_vars:
                raise ContractViolation(f"disabled activation literal in analyzed clause {c}")

    def _analyze(self, confl: Clause):
        seen = self.seen
        level = self.level
        trail = self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        to_clear = []
        path = 0
        p = None
        idx = len(trail) - 1
        c = confl
        debug = self.debug
        while True:
            if debug:
                self._check_used(c, p)
            lits = c.lits
            for q in (lits if p is None else lits[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump(v)
                    seen[v] = 1
                    to_clear.append(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            seen[v] = 0
            path -= 1
            if path == 0:
                break
            c = self._reason_of(v)
        learnt[0] = p ^ 1

        # recursive minimization
        if len(learnt) > 1:
            abstract = 0
            for q in learnt[1:]:
                abstract |= 1 << (level[q >> 1] & 31)
            kept = [learnt[0]]
            for q in learnt[1:]:
                if self.reason[q >> 1] is None or not self._redundant(q, abstract, to_clear):
                    kept.append(q)
            learnt = kept
        for v in to_clear:
            seen[v] = 0

        if len(learnt) == 1:
            bt = 0
        else:
            best = max(range(1, len(learnt)), key=lambda i: level[learnt[i] >> 1])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bt = level[learnt[1] >> 1]
        lbd = len({level[q >> 1] for q in learnt})
        return learnt, bt, lbd

    def _redundant(self, q: int, abstract: int, to_clear: list) -> bool:
        seen = self.seen
        level = self.level
        stack = [q]
        top = len(to_clear)
        while stack:
            x = stack.pop()
            c = self._reason_of(x >> 1)
            for y in c.lits[1:]:
                v = y >> 1
                if seen[v] or level[v] == 0:
                    continue
                if self.reason[v] is not None and (1 << (level[v] & 31)) & abstract:
                    seen[v] = 1
                    stack.append(y)
                    to_clear.append(v)
                else:
                    for w in to_clear[top:]:
                        seen[w] = 0
                    del to_clear[top:]
                    return False
        return True

    def _analyze_final(self, failed: int) -> list[int]:
        """Assumptions responsible for ``failed`` (an assumption found false)."""
        core = [_dec(failed)]
        v0 = failed >> 1
        if self.level[v0] == 0:
            return core
        seen = self.seen
        seen[v0] = 1
        trail = self.trail
        for i in range(len(trail) - 1, self.trail_lim[0] - 1, -1):
            x = trail[i]
            v = x >> 1
            if not seen[v]:
                continue
            r = self.reason[v]
            if r is None:
                core.append(_dec(x))
            else:
                r = self._reason_of(v)
                for q in r.lits[1:]:
                    if self.level[q >> 1] > 0:
                        seen[q >> 1] = 1
            seen[v] = 0
        seen[v0] = 0
        return core

    # ------------------------------------------------------------------
    # clause database

    def _locked(self, c: Clause) -> bool:
        first = c.lits[0]
        return self.vals[first] == 1 and self.reason[first >> 1] is c

    def _reduce_db(self) -> None:
        self.stats.reductions += 1
        learnts = [c for c in self.learnts if not c.deleted]
        learnts.sort(key=lambda c: c.lbd)
        keep_n = len(learnts) // 2
        kept = learnts[:keep_n]
        for c in learnts[keep_n:]:
            if c.lbd <= 2 or len(c.lits) <= 2 or self._locked(c):
                kept.append(c)
            else:
                c.deleted = True
        self.learnts = kept

    # ------------------------------------------------------------------
    # search

    def _pick_branch(self) -> int:
        heap = self.heap
        vals = self.vals
        act = self.activity
        while heap:
            a, v = heapq.heappop(heap)
            if vals[v << 1] == 0 and -a == act[v]:
                return v
        return 0

    def solve(self, assumptions=(), *, conflict_limit: int | None = None,
              deadline: float | None = None) -> Status:
        """Decide the clause set under ``assumptions``.

        On SAT, ``self.model`` holds one signed literal per variable. On
        UNSAT under assumptions, ``self.core`` lists assumption literals whose
        conjunction is refuted. UNKNOWN means a budget ran out.
        """
        self.model = None
        self.core = []
        if not self.ok:
            return Status.UNSAT
        self._backtrack(0)
        assumps = [_enc(a) for a in assumptions]
        for a in assumptions:
            self.ensure_vars(abs(a))
        stats = self.stats
        start_conflicts = stats.conflicts
        restart_no = 0
        restart_budget = luby(0) * self.restart_unit
        conflicts_here = 0
        status = Status.UNKNOWN
        while True:
            confl = self._propagate()
            if confl is not None:
                stats.conflicts += 1
                conflicts_here += 1
                if not self.ok or len(self.trail_lim) == 0:
                    self.ok = False
                    status = Status.UNSAT
                    break
                learnt, bt, lbd = self._analyze(confl)
                self._backtrack(bt)
                stats.learnt_literals += len(learnt)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    c = Clause(learnt, learnt=True, lbd=lbd)
                    self._attach(c)
                    self.learnts.append(c)
                    self._assign(learnt[0], c)
                self.var_inc /= self.decay
                if conflict_limit is not None and stats.conflicts - start_conflicts >= conflict_limit:
                    break
                if deadline is not None and time.monotonic() >= deadline:
                    break
                if stats.conflicts >= self._next_reduce:
                    self._next_reduce = stats.conflicts + 2000 + self._reduce_step * stats.reductions
                    self._reduce_db()
                continue

            if conflicts_here >= restart_budget:
                restart_no += 1
                stats.restarts += 1
                conflicts_here = 0
                restart_budget = luby(restart_no) * self.restart_unit
                self._backtrack(min(len(assumps), len(self.trail_lim)))
                continue

            dl = len(self.trail_lim)
            if dl < len(assumps):
                a = assumps[dl]
                s = self.vals[a]
                if s == 1:
                    self._new_level()
                    continue
                if s == -1:
                    self.core = self._analyze_final(a)
                    status = Status.UNSAT
                    break
                self._new_level()
                self._assign(a, None)
                continue

            code = 0
            if self.prop is not None:
                lit = self.prop.cb_decide()
                if lit:
                    c = _enc(lit)
                    self.ensure_vars(abs(lit))
                    if self.vals[c] == 0:
                        code = c
                        stats.ext_decisions += 1
            if not code:
                v = self._pick_branch()
                if v:
                    code = v << 1 if self.polarity[v] else (v << 1) | 1
            if code:
                stats.decisions += 1
                if deadline is not None and stats.decisions & 255 == 0 and time.monotonic() >= deadline:
                    break
                self._new_level()
                self._assign(code, None)
                continue

            # complete assignment
            model = [v if self.vals[v << 1] == 1 else -v for v in range(1, self.nvars + 1)]
            if self.prop is not None and not self.prop.cb_check_found_model(model):
                added = False
                while True:
                    ext = self.prop.cb_add_external()
                    if ext is None:
                        break
                    added = True
                    stats.ext_clauses += 1
                    if self.debug:
                        self.external_log.append(tuple(ext))
                    confl = self._add_clause_in_search(ext, learnt=True)
                    if confl is not None:
                        break
                if not added:
                    raise ContractViolation("model refuted without a refuting clause")
                if confl is not None:
                    # re-enter the loop through conflict handling
                    self._pending_conflict(confl)
                    if not self.ok:
                        status = Status.UNSAT
                        break
                continue
            if self.debug:
                self._check_model(model, assumptions)
            self.model = model
            status = Status.SAT
            break
        self._backtrack(0)
        return status

    def _pending_conflict(self, confl: Clause) -> None:
        self.stats.conflicts += 1
        if not self.ok or len(self.trail_lim) == 0:
            self.ok = False
            return
        learnt, bt, lbd = self._analyze(confl)
        self._backtrack(bt)
        if len(learnt) == 1:
            self._assign(learnt[0], None)
        else:
            c = Clause(learnt, learnt=True, lbd=lbd)
            self._attach(c)
            self.learnts.append(c)
            self._assign(learnt[0], c)
        self.var_inc /= self.decay

    def _check_model(self, model, assumptions) -> None:
        truth = set(model)
        for c in self.clauses:
            if not any(_dec(x) in truth for x in c.lits):
                raise ContractViolation(f"model falsifies clause {c}")
        for lits in self.external_log:
            if not any(x in truth for x in lits):
                raise ContractViolation(f"model falsifies external clause {lits}")
        for a in assumptions:
            if a not in truth:
                raise ContractViolation(f"model violates assumption {a}")

    # ------------------------------------------------------------------
    # export

    def to_dimacs(self) -> str:
        """Irredundant clauses plus level-0 units in ``p cnf`` format."""
        units = [[_dec(c)] for c in self.trail[: self.trail_lim[0] if self.trail_lim else len(self.trail)]]
        rows = [[_dec(x) for x in c.lits] for c in self.clauses if not c.deleted] + units
        out = [f"p cnf {self.nvars} {len(rows)}"]
        out += [" ".join(map(str, r)) + " 0" for r in rows]
        return "\n".join(out) + "\n"
