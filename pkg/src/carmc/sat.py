"""Incremental CDCL SAT solver with ordered assumptions and core extraction.

Literals at the API are DIMACS integers (``v`` / ``-v``, ``v >= 1``).
Internally a literal is coded as ``2*v`` (positive) or ``2*v + 1``.

Assumptions are decided first, one per decision level, in exactly the
order given.  When an assumption is found false, the final conflict is
traced back through the implication graph to assumption decisions; the
resulting core lists those assumptions in their supplied order, and the
failed assumption itself (the one of greatest position) is reported as
the conflict literal.
"""

from __future__ import annotations

import heapq
import random
import sys
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple


@dataclass
class SolveResult:
    satisfiable: bool
    model: Optional[List[bool]] = None  # indexed by variable, slot 0 unused
    core: Tuple[int, ...] = ()
    conflict_literal: Optional[int] = None

    def __bool__(self) -> bool:
        return self.satisfiable

    def value(self, lit: int) -> bool:
        v = self.model[abs(lit)]
        return v if lit > 0 else not v


def extract_state(result: SolveResult, variables: Sequence[int]) -> Tuple[int, ...]:
    """Project a satisfying assignment onto ``variables`` as a full cube."""
    if not result.satisfiable:
        raise ValueError("extract_state needs a satisfiable result")
    model = result.model
    return tuple(v if model[v] else -v for v in variables)


class Solver:
    def __init__(self, num_vars: int = 0, *, var_decay: float = 0.95,
                 phase_saving: bool = True, restarts: bool = False, seed: int = 0,
                 max_learnts: int = 4000):
        self.var_decay = var_decay
        self.phase_saving = phase_saving
        self.restarts = restarts
        self.max_learnts = max_learnts
        self._rng = random.Random(seed) if seed else None

        self.num_vars = 0
        self._val: List[int] = [0, 0]  # per literal code: 1 true, -1 false, 0 unassigned
        self._level: List[int] = [0]
        self._reason: List[Optional[list]] = [None]
        self._activity: List[float] = [0.0]
        self._phase: List[bool] = [False]
        self._watches: List[List[list]] = [[], []]
        self._seen: List[bool] = [False]
        self._heap: List[Tuple[float, int]] = []

        self._clauses: List[list] = []
        self._learnts: List[list] = []
        self._trail: List[int] = []
        self._trail_lim: List[int] = []
        self._qhead = 0
        self._var_inc = 1.0
        self._ok = True
        self.stats = {"solves": 0, "conflicts": 0, "decisions": 0, "propagations": 0}

        if num_vars:
            self.ensure_vars(num_vars)

    # -- variables and clauses -------------------------------------------------

    def new_var(self) -> int:
        self.num_vars += 1
        v = self.num_vars
        self._val += [0, 0]
        self._level.append(0)
        self._reason.append(None)
        act = self._rng.random() * 1e-5 if self._rng else 0.0
        self._activity.append(act)
        self._phase.append(False)
        self._watches += [[], []]
        self._seen.append(False)
        heapq.heappush(self._heap, (-act, v))
        return v

    def ensure_vars(self, n: int) -> None:
        while self.num_vars < n:
            self.new_var()

    @property
    def okay(self) -> bool:
        """False once the clause database is unsatisfiable on its own."""
        return self._ok

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a permanent clause; returns False if the database became UNSAT."""
        if not self._ok:
            return False
        if self._trail_lim:
            self._cancel_until(0)
        val = self._val
        codes = []
        seen = set()
        for lit in lits:
            v = abs(lit)
            if lit == 0 or v > self.num_vars:
                raise ValueError(f"literal {lit} out of range (num_vars={self.num_vars})")
            c = 2 * v + (lit < 0)
            if c in seen:
                continue
            if c ^ 1 in seen:
                return True  # tautology
            seen.add(c)
            if val[c] == 1:
                return True
            if val[c] == -1:
                continue  # false at level 0
            codes.append(c)
        if not codes:
            self._ok = False
            return False
        if len(codes) == 1:
            self._enqueue(codes[0], None)
            if self._propagate() is not None:
                self._ok = False
                return False
            return True
        self._clauses.append(codes)
        self._watches[codes[0]].append(codes)
        self._watches[codes[1]].append(codes)
        return True

    # -- core search -------------------------------------------------------------

    def _enqueue(self, code: int, reason: Optional[list]) -> None:
        v = code >> 1
        self._val[code] = 1
        self._val[code ^ 1] = -1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(code)

    def _propagate(self) -> Optional[list]:
        val = self._val
        watches = self._watches
        trail = self._trail
        level = self._level
        reason = self._reason
        dl = len(self._trail_lim)
        qhead = self._qhead
        conflict = None
        props = 0
        while qhead < len(trail):
            false_lit = trail[qhead] ^ 1
            qhead += 1
            props += 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        conflict = c
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                    else:
                        # unit: inline enqueue
                        val[first] = 1
                        val[first ^ 1] = -1
                        v = first >> 1
                        level[v] = dl
                        reason[v] = c
                        trail.append(first)
            del ws[j:]
            if conflict is not None:
                qhead = len(trail)
                break
        self._qhead = qhead
        self.stats["propagations"] += props
        return conflict

    def _cancel_until(self, lvl: int) -> None:
        if len(self._trail_lim) <= lvl:
            return
        trail = self._trail
        val = self._val
        reason = self._reason
        phase = self._phase
        activity = self._activity
        heap = self._heap
        stop = self._trail_lim[lvl]
        for k in range(len(trail) - 1, stop - 1, -1):
            code = trail[k]
            v = code >> 1
            val[code] = 0
            val[code ^ 1] = 0
            reason[v] = None
            if self.phase_saving:
                phase[v] = not (code & 1)
            heapq.heappush(heap, (-activity[v], v))
        del trail[stop:]
        del self._trail_lim[lvl:]
        self._qhead = stop

    def _bump(self, v: int) -> None:
        act = self._activity[v] + self._var_inc
        self._activity[v] = act
        if act > 1e100:
            self._activity = [a * 1e-100 for a in self._activity]
            self._var_inc *= 1e-100
            self._heap = [(-self._activity[u], u) for u in range(1, self.num_vars + 1)
                          if self._val[2 * u] == 0]
            heapq.heapify(self._heap)
        elif self._val[2 * v] == 0:
            heapq.heappush(self._heap, (-act, v))

    def _analyze(self, conflict: list) -> Tuple[list, int]:
        """First-UIP learning; returns (learnt clause, backtrack level)."""
        seen = self._seen
        level = self._level
        reason = self._reason
        trail = self._trail
        dl = len(self._trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        clause = conflict
        touched = []
        while True:
            start = 0 if p == -1 else 1
            for k in range(start, len(clause)):
                q = clause[k]
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    touched.append(v)
                    self._bump(v)
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            clause = reason[p >> 1]
            seen[p >> 1] = False
            path -= 1
            if path <= 0:
                break
            if clause[0] != p:
                # reason clauses keep the implied literal first
                k = clause.index(p)
                clause[0], clause[k] = clause[k], clause[0]
        learnt[0] = p ^ 1
        for v in touched:
            seen[v] = False
        if len(learnt) == 1:
            return learnt, 0
        best = 1
        for k in range(2, len(learnt)):
            if level[learnt[k] >> 1] > level[learnt[best] >> 1]:
                best = k
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def _analyze_final(self, failed: int) -> set:
        """Assumption codes responsible for ``failed`` (an assumption code) being false."""
        core = {failed}
        if not self._trail_lim:
            return core
        seen = self._seen
        level = self._level
        reason = self._reason
        trail = self._trail
        seen[failed >> 1] = True
        for k in range(len(trail) - 1, self._trail_lim[0] - 1, -1):
            code = trail[k]
            v = code >> 1
            if not seen[v]:
                continue
            r = reason[v]
            if r is None:
                if level[v] > 0:
                    core.add(code)
            else:
                for q in r:
                    if level[q >> 1] > 0:
                        seen[q >> 1] = True
            seen[v] = False
        seen[failed >> 1] = False
        return core

    def _pick_branch(self) -> int:
        heap = self._heap
        val = self._val
        activity = self._activity
        while heap:
            neg_act, v = heapq.heappop(heap)
            if val[2 * v] == 0 and -neg_act == activity[v]:
                return 2 * v + (0 if self._phase[v] else 1)
        for v in range(1, self.num_vars + 1):
            if val[2 * v] == 0:
                return 2 * v + (0 if self._phase[v] else 1)
        return -1

    def _reduce_db(self) -> None:
        locked = set()
        for code in self._trail:
            r = self._reason[code >> 1]
            if r is not None:
                locked.add(id(r))
        self._learnts.sort(key=len)
        keep = self._learnts[: len(self._learnts) // 2]
        keep += [c for c in self._learnts[len(self._learnts) // 2:] if id(c) in locked]
        self._learnts = keep
        watches = [[] for _ in range(len(self._watches))]
        for c in self._clauses:
            watches[c[0]].append(c)
            watches[c[1]].append(c)
        for c in keep:
            watches[c[0]].append(c)
            watches[c[1]].append(c)
        self._watches = watches

    def solve(self, assumptions: Sequence[int] = ()) -> SolveResult:
        """Decide the clause database under ``assumptions`` (decided in order)."""
        self.stats["solves"] += 1
        if not self._ok:
            return SolveResult(False, core=(), conflict_literal=None)
        assumps = []
        for lit in assumptions:
            v = abs(lit)
            if lit == 0 or v > self.num_vars:
                raise ValueError(f"assumption {lit} out of range (num_vars={self.num_vars})")
            assumps.append(2 * v + (lit < 0))
        if len(self._learnts) > self.max_learnts:
            self._reduce_db()
        try:
            return self._search(assumps, assumptions)
        finally:
            self._cancel_until(0)

    def _search(self, assumps: List[int], original: Sequence[int]) -> SolveResult:
        val = self._val
        n_assumps = len(assumps)
        conflicts_until_restart = 100
        luby_k = 0
        conflicts_here = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.stats["conflicts"] += 1
                conflicts_here += 1
                if not self._trail_lim:
                    self._ok = False
                    return SolveResult(False, core=(), conflict_literal=None)
                learnt, bt = self._analyze(conflict)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._learnts.append(learnt)
                    self._watches[learnt[0]].append(learnt)
                    self._watches[learnt[1]].append(learnt)
                    self._enqueue(learnt[0], learnt)
                self._var_inc /= self.var_decay
                if self.restarts and conflicts_here >= conflicts_until_restart:
                    luby_k += 1
                    conflicts_until_restart = conflicts_here + 100 * _luby(luby_k)
                    self._cancel_until(0)
                continue

            nxt = -1
            while len(self._trail_lim) < n_assumps:
                p = assumps[len(self._trail_lim)]
                if val[p] == 1:
                    self._trail_lim.append(len(self._trail))
                elif val[p] == -1:
                    core_codes = self._analyze_final(p)
                    return self._unsat_result(core_codes, assumps, original)
                else:
                    nxt = p
                    break
            if nxt == -1:
                nxt = self._pick_branch()
                if nxt == -1:
                    model = [False] * (self.num_vars + 1)
                    for v in range(1, self.num_vars + 1):
                        model[v] = val[2 * v] == 1
                    return SolveResult(True, model=model)
                self.stats["decisions"] += 1
            self._trail_lim.append(len(self._trail))
            self._enqueue(nxt, None)

    @staticmethod
    def _unsat_result(core_codes: set, assumps: List[int], original: Sequence[int]) -> SolveResult:
        core = []
        placed = set()
        for code, lit in zip(assumps, original):
            if code in core_codes and code not in placed:
                placed.add(code)
                core.append(lit)
        # the failed assumption sits deepest, so it is last in supplied order
        return SolveResult(False, core=tuple(core), conflict_literal=core[-1])


def _luby(x: int) -> int:
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x %= size
    return 1 << seq


# ---------------------------------------------------------------------------
# DIMACS front end


def parse_dimacs(text: str) -> Tuple[int, List[List[int]], List[int]]:
    """Return (num_vars, clauses, assumptions); ``a <lits> 0`` lines give assumptions."""
    num_vars = 0
    clauses: List[List[int]] = []
    assumptions: List[int] = []
    current: List[int] = []
    target = clauses
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        if line.startswith("a"):
            lits = [int(x) for x in line[1:].split()]
            if not lits or lits[-1] != 0:
                raise ValueError("assumption line must end with 0")
            assumptions.extend(lits[:-1])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                target.append(current)
                current = []
            else:
                num_vars = max(num_vars, abs(lit))
                current.append(lit)
    if current:
        clauses.append(current)
    for lit in assumptions:
        num_vars = max(num_vars, abs(lit))
    return num_vars, clauses, assumptions


def solve_dimacs(text: str) -> Tuple[SolveResult, str]:
    num_vars, clauses, assumptions = parse_dimacs(text)
    solver = Solver(num_vars)
    for c in clauses:
        solver.add_clause(c)
    result = solver.solve(assumptions)
    if result.satisfiable:
        vals = [str(v if result.model[v] else -v) for v in range(1, num_vars + 1)]
        out = "s SATISFIABLE\nv " + " ".join(vals + ["0"]) + "\n"
    else:
        out = "s UNSATISFIABLE\nu " + " ".join([str(x) for x in result.core] + ["0"]) + "\n"
    return result, out


def main(argv: Optional[Sequence[str]] = None) -> int:
    """``python -m carmc.sat FILE``: exit 10 on SAT, 20 on UNSAT (core on the ``u`` line)."""
    argv = sys.argv[1:] if argv is None else list(argv)
    if len(argv) != 1:
        print("usage: python -m carmc.sat FILE.cnf", file=sys.stderr)
        return 64
    try:
        with open(argv[0]) if argv[0] != "-" else sys.stdin as fh:
            text = fh.read()
        result, out = solve_dimacs(text)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 65
    sys.stdout.write(out)
    return 10 if result.satisfiable else 20


if __name__ == "__main__":
    sys.exit(main())
