"""Incremental CDCL SAT solver used as the NP oracle.

Watched-literal propagation, first-UIP clause learning, activity-based
branching and Luby restarts.  The clause database only grows; there is no
clause deletion.  Solving under assumptions is supported by deciding the
assumption literals first, so the learned clauses are always consequences
of the database alone and stay valid across calls.

All heuristic constants are fixed for reproducibility:
  - branching picks the unassigned variable with the highest activity,
    smallest id on ties, and always assigns it false first;
  - activity bump 1.0, decay factor 0.95, rescale threshold 1e100;
  - Luby restarts with a base interval of 128 conflicts.
"""

from __future__ import annotations

from dataclasses import dataclass

_RESCALE_LIMIT = 1e100
_VAR_DECAY = 0.95
_RESTART_BASE = 128


@dataclass
class SatResult:
    satisfiable: bool
    model: dict[int, bool] | None = None


class _Clause:
    __slots__ = ("lits",)

    def __init__(self, lits):
        self.lits = list(lits)


def _luby(i: int) -> int:
    """i-th element (1-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    while True:
        k = i.bit_length()
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1


class Solver:
    """A single-threaded incremental SAT solver over variables 1..nvars."""

    def __init__(self):
        self.nvars = 0
        self.assign = [0]  # per var: 0 unassigned, +1 true, -1 false
        self.level = [0]
        self.reason: list[_Clause | None] = [None]
        self.activity = [0.0]
        self.var_inc = 1.0
        self.watches: dict[int, list[_Clause]] = {}
        self.clauses: list[_Clause] = []  # watched: problem + learned
        self.problem_lits: list[tuple[int, ...]] = []  # as added, for dump/check
        self.root_units: list[int] = []
        self.has_empty = False
        self.unsat_at_root = False
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0

    # ------------------------------------------------------------------
    # clause database

    def ensure_var(self, v: int):
        while self.nvars < v:
            self.nvars += 1
            self.assign.append(0)
            self.level.append(0)
            self.reason.append(None)
            self.activity.append(0.0)

    def add_clause(self, lits) -> None:
        """Add a clause permanently; duplicates and tautologies are tolerated.

        The clause is simplified against the level-0 assignment, which only
        ever grows, so literals false at the root can be dropped and a
        clause satisfied at the root needs no watches."""
        if self.trail_lim:
            self._cancel_until(0)
        lits = sorted(set(lits), key=lambda l: (abs(l), l))
        if any(-l in lits for l in lits):
            return  # tautology, no constraint
        for l in lits:
            self.ensure_var(abs(l))
        self.problem_lits.append(tuple(lits))
        kept = []
        for l in lits:
            val = self._value(l)
            if val is True:
                return  # satisfied by a permanent root assignment
            if val is None:
                kept.append(l)
        if not kept:
            self.has_empty = True
        elif len(kept) == 1:
            self.root_units.append(kept[0])
        else:
            c = _Clause(kept)
            self.clauses.append(c)
            self._watch(c)

    def _watch(self, c: _Clause):
        self.watches.setdefault(c.lits[0], []).append(c)
        self.watches.setdefault(c.lits[1], []).append(c)

    def to_dimacs(self) -> str:
        """Debug dump of the problem clauses (as added) in DIMACS."""
        body = [" ".join(str(l) for l in c) + " 0" if c else "0" for c in self.problem_lits]
        return f"p cnf {self.nvars} {len(body)}\n" + "\n".join(body) + ("\n" if body else "")

    # ------------------------------------------------------------------
    # assignment handling

    def _value(self, lit: int):
        a = self.assign[abs(lit)]
        if a == 0:
            return None
        return (a > 0) == (lit > 0)

    def _enqueue(self, lit: int, reason: _Clause | None):
        v = abs(lit)
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel_until(self, lvl: int):
        if len(self.trail_lim) <= lvl:
            return
        lim = self.trail_lim[lvl]
        for lit in self.trail[lim:]:
            v = abs(lit)
            self.assign[v] = 0
            self.reason[v] = None
        del self.trail[lim:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    # ------------------------------------------------------------------
    # propagation

    def _propagate(self) -> _Clause | None:
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            neg = -p
            ws = self.watches.get(neg)
            if not ws:
                continue
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                L = c.lits
                if L[0] == neg:
                    L[0], L[1] = L[1], L[0]
                first = L[0]
                fv = self._value(first)
                if fv is True:
                    ws[j] = c
                    j += 1
                    continue
                moved = False
                for k in range(2, len(L)):
                    if self._value(L[k]) is not False:
                        L[1], L[k] = L[k], L[1]
                        self.watches.setdefault(L[1], []).append(c)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = c
                j += 1
                if fv is False:
                    while i < n:  # keep the unprocessed watchers
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(self.trail)
                    return c
                self._enqueue(first, c)
            del ws[j:]
        return None

    # ------------------------------------------------------------------
    # conflict analysis

    def _bump(self, v: int):
        self.activity[v] += self.var_inc
        if self.activity[v] > _RESCALE_LIMIT:
            for u in range(1, self.nvars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100

    def _analyze(self, confl: _Clause):
        """First-UIP learning; returns (learned lits, backjump level)."""
        current = len(self.trail_lim)
        seen: set[int] = set()
        tail: list[int] = []
        counter = 0
        p_lit = None
        idx = len(self.trail) - 1
        cl = confl
        while True:
            for q in cl.lits:
                if q == p_lit:
                    continue
                v = abs(q)
                lv = self.level[v]
                if v in seen or lv == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if lv == current:
                    counter += 1
                else:
                    tail.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p_lit = self.trail[idx]
            idx -= 1
            seen.remove(abs(p_lit))
            counter -= 1
            if counter == 0:
                break
            cl = self.reason[abs(p_lit)]
        learned = [-p_lit] + tail
        if len(learned) == 1:
            return learned, 0
        # put a literal from the backjump level at position 1 for watching
        bi = max(range(1, len(learned)), key=lambda k: self.level[abs(learned[k])])
        learned[1], learned[bi] = learned[bi], learned[1]
        return learned, self.level[abs(learned[1])]

    # ------------------------------------------------------------------
    # search

    def _pick_branch_var(self) -> int | None:
        best, best_act = None, -1.0
        assign = self.assign
        act = self.activity
        for v in range(1, self.nvars + 1):
            if assign[v] == 0 and act[v] > best_act:
                best, best_act = v, act[v]
        return best

    def solve(self, assumptions=()) -> SatResult:
        """Decide database /\\ assumptions; deterministic for identical call sequences."""
        if self.has_empty:
            self.unsat_at_root = True
        if self.unsat_at_root:
            return SatResult(False)
        self._cancel_until(0)
        for a in assumptions:
            self.ensure_var(abs(a))
        for u in self.root_units:
            val = self._value(u)
            if val is False:
                self.unsat_at_root = True
                return SatResult(False)
            if val is None:
                self._enqueue(u, None)
        if self._propagate() is not None:
            self.unsat_at_root = True
            return SatResult(False)

        conflicts = 0
        restart_idx = 1
        threshold = _RESTART_BASE * _luby(restart_idx)
        while True:
            confl = self._propagate()
            if confl is not None:
                if not self.trail_lim:
                    self.unsat_at_root = True
                    return SatResult(False)
                conflicts += 1
                learned, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learned) == 1:
                    self.root_units.append(learned[0])
                    self._enqueue(learned[0], None)
                else:
                    c = _Clause(learned)
                    self.clauses.append(c)
                    self._watch(c)
                    self._enqueue(learned[0], c)
                self.var_inc /= _VAR_DECAY
                continue
            if conflicts >= threshold:
                conflicts = 0
                restart_idx += 1
                threshold = _RESTART_BASE * _luby(restart_idx)
                self._cancel_until(0)
                continue
            progressed = False
            for a in assumptions:
                val = self._value(a)
                if val is False:
                    return SatResult(False)
                if val is None:
                    self.trail_lim.append(len(self.trail))
                    self._enqueue(a, None)
                    progressed = True
                    break
            if progressed:
                continue
            v = self._pick_branch_var()
            if v is None:
                model = {u: self.assign[u] > 0 for u in range(1, self.nvars + 1)}
                assert self._model_ok(model, assumptions)
                return SatResult(True, model)
            self.trail_lim.append(len(self.trail))
            self._enqueue(-v, None)  # default-false polarity

    def _model_ok(self, model, assumptions) -> bool:
        for c in self.problem_lits:
            if not any(model[abs(l)] == (l > 0) for l in c):
                return False
        return all(model[abs(a)] == (a > 0) for a in assumptions)
