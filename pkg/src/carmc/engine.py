"""Backward CAR model checking with pluggable assumption ordering, plus the
hybrid mode that restarts the search with a wider locality on a timer."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from .aiger import AigModel, initial_cube
from .cnf import Encoding, encode, not_initial_clause
from .frames import BadStates, OFrames, UNode, USequence, invariant_check
from .metrics import RunStats
from .reorder import OrderingConfig, ReorderContext, Strategy, reorder
from .sat import SolveResult, Solver

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceStep:
    state: Tuple[bool, ...]
    inputs: Tuple[bool, ...]


@dataclass
class Verdict:
    status: str  # "safe", "unsafe" or "unknown"
    level: Optional[int] = None
    trace: List[TraceStep] = field(default_factory=list)
    reason: str = ""
    stats: RunStats = field(default_factory=RunStats)

    @property
    def safe(self) -> bool:
        return self.status == "safe"

    @property
    def unsafe(self) -> bool:
        return self.status == "unsafe"


@dataclass(frozen=True)
class HybridConfig:
    base: OrderingConfig = OrderingConfig(Strategy.LOCAL, 1)
    time_limit: float = 1.0  # seconds per configuration
    growth: float = 2.0
    budget: Optional[float] = None

    def __post_init__(self):
        if self.growth < 1:
            raise ValueError("growth factor must be >= 1")
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")


class Hooks:
    """Observation points for tests and debugging; all no-ops by default."""

    def on_block(self, engine: "CarEngine", level: int, cube: Tuple[int, ...], state: Tuple[int, ...]) -> None:
        pass

    def on_restart(self, engine: "CarEngine", event: dict) -> None:
        pass

    def on_round(self, engine: "CarEngine", index: int) -> None:
        pass


class _Restart(Exception):
    pass


class _Stop(Exception):
    def __init__(self, verdict: Verdict):
        self.verdict = verdict


class CarEngine:
    def __init__(self, model: AigModel, config: OrderingConfig = OrderingConfig(), *,
                 history_capacity: int = 8, pick_oldest_first: bool = False, seed: int = 0,
                 hooks: Optional[Hooks] = None, clock: Callable[[], float] = time.monotonic,
                 debug: bool = False):
        self.model = model
        self.config = config
        self.hooks = hooks or Hooks()
        self.clock = clock
        self.debug = debug
        self.stats = RunStats()
        self.enc: Encoding = encode(model)
        self.init = initial_cube(model)
        self.frames = OFrames(self.init)
        self.useq = USequence(self.init, oldest_first=pick_oldest_first)
        self.ctx = ReorderContext(max(history_capacity, config.ilimit))
        self.bad_states = BadStates(self.enc)
        self.solver = Solver(self.enc.num_vars, seed=seed)
        for c in self.enc.trans_clauses:
            self.solver.add_clause(c)
        for c in self.enc.bad_clauses:
            self.solver.add_clause(c)
        self._neg_init_next = self.enc.prime(not_initial_clause(model))
        self._acts: List[int] = []
        self._new_level_act()
        self.solver.add_clause([-self._acts[0], self.enc.bad_next])
        self._bad_inputs: Tuple[bool, ...] = ()
        self._time_limit = math.inf
        self._growth = 1.0
        self._timer_start = 0.0

    # -- solver plumbing -------------------------------------------------------

    def _new_level_act(self) -> int:
        act = self.solver.new_var()
        self._acts.append(act)
        if len(self._acts) > 1:
            self.solver.add_clause([-act] + list(self._neg_init_next))
        return act

    def _add_frame_clause(self, level: int, cube: Sequence[int]) -> None:
        self.solver.add_clause([-self._acts[level]] + [-x for x in self.enc.prime(cube)])

    def _query(self, ordered: Sequence[int], level: int) -> SolveResult:
        act = self._acts[level]
        t0 = time.perf_counter()
        res = self.solver.solve([act] + list(ordered))
        dt = time.perf_counter() - t0
        if not res.satisfiable:
            core = tuple(x for x in res.core if x != act)
            confl = res.conflict_literal if res.conflict_literal != act else None
            res = SolveResult(False, core=core, conflict_literal=confl)
            if self.debug:
                again = self.solver.solve([act] + list(core))
                assert not again.satisfiable, "core does not re-solve to UNSAT"
        self.stats.record_query(res.satisfiable, dt, None if res.satisfiable else len(res.core))
        return res

    def _bits(self, cube: Sequence[int]) -> Tuple[bool, ...]:
        return tuple(x > 0 for x in cube)

    # -- public entry points ---------------------------------------------------

    def check(self, budget: Optional[float] = None) -> Verdict:
        return self._run(budget, hybrid=None)

    def hybrid_check(self, hcfg: HybridConfig) -> Verdict:
        self.config = hcfg.base
        self.ctx.ensure_capacity(hcfg.base.ilimit)
        return self._run(hcfg.budget, hybrid=hcfg)

    def restart(self) -> None:
        """Collapse U to the reset state and switch to the next configuration.

        Frames and their solver clauses are kept; the pending frame is dropped
        along with the abandoned round."""
        before = self.frames.snapshot()
        old = self.config
        self.config = old.next_config()
        self.ctx.ensure_capacity(self.config.ilimit)
        self.useq.reset()
        self.ctx.clear()
        self.frames.reset_tmp()
        self._time_limit *= self._growth
        self._timer_start = self.clock()
        self.stats.restarts += 1
        event = {
            "ilimit_before": old.ilimit,
            "ilimit_after": self.config.ilimit,
            "u_size_after": len(self.useq),
            "frames_unchanged": before == self.frames.snapshot(),
            "time_limit": self._time_limit,
        }
        self.stats.restart_events.append(event)
        log.info("restart=%d ilimit=%d time_limit=%s", self.stats.restarts, self.config.ilimit, self._time_limit)
        self.hooks.on_restart(self, event)

    # -- main loop -------------------------------------------------------------

    def _run(self, budget: Optional[float], hybrid: Optional[HybridConfig]) -> Verdict:
        start = self.clock()
        wall0 = time.perf_counter()
        deadline = start + budget if budget is not None else math.inf
        if hybrid is not None:
            self._time_limit = hybrid.time_limit
            self._growth = hybrid.growth
        self._timer_start = self._start = start
        try:
            verdict = self._trivial() or self._loop(deadline, hybrid is not None)
        except _Stop as stop:
            verdict = stop.verdict
        except MemoryError:
            verdict = Verdict("unknown", reason="memory")
        self.stats.verdict = verdict.status
        self.stats.total_time = time.perf_counter() - wall0
        verdict.stats = self.stats
        return verdict

    def _trivial(self) -> Optional[Verdict]:
        enc = self.enc
        if enc.bad == -enc.true_var:
            return Verdict("safe", level=0)
        self.stats.aux_queries += 1
        res = self.solver.solve(list(self.init) + [enc.bad])
        if res.satisfiable:
            inputs = tuple(res.model[v] for v in enc.input_vars)
            return Verdict("unsafe", trace=[TraceStep(self._bits(self.init), inputs)])
        if not self.init:
            return Verdict("safe", level=0)
        return None

    def _loop(self, deadline: float, hybrid: bool) -> Verdict:
        frames = self.frames
        useq = self.useq
        stats = self.stats
        round_index = 0
        while True:
            round_t0 = time.perf_counter()
            useq.start_round()
            try:
                while True:
                    node = useq.pick()
                    if node is None:
                        break
                    self._prove(node, deadline, hybrid)
            except _Restart:
                continue
            round_index += 1
            stats.record_round(round_index, time.perf_counter() - round_t0, len(useq))
            log.info("round=%d frames=%d u=%d elapsed=%.3f", round_index, len(frames), len(useq),
                     self.clock() - self._start)
            self.hooks.on_round(self, round_index)
            stats.invariant_checks += 1
            level = invariant_check(frames, self.enc, self.bad_states)
            if level is not None:
                return Verdict("safe", level=level)
            lvl = frames.new_frame()
            self._new_level_act()
            for cube in frames.levels[lvl].cubes:
                self._add_frame_clause(lvl, cube)

    def _prove(self, node: UNode, deadline: float, hybrid: bool) -> None:
        """Work one obligation stack seeded with ``node`` until it empties."""
        frames = self.frames
        enc = self.enc
        ctx = self.ctx
        stats = self.stats
        t0 = time.perf_counter()
        calls0 = stats.queries
        stack: List[Tuple[UNode, int]] = [(node, len(frames) - 1)]
        while stack:
            now = self.clock()
            if now > deadline:
                stats.record_proof(stats.queries - calls0, time.perf_counter() - t0, "timeout")
                raise _Stop(Verdict("unknown", reason="timeout"))
            if hybrid and now - self._timer_start > self._time_limit:
                stats.record_proof(stats.queries - calls0, time.perf_counter() - t0, "restart")
                self.restart()
                raise _Restart()
            cur, l = stack[-1]
            if l < 0:
                stats.record_proof(stats.queries - calls0, time.perf_counter() - t0, "cex")
                raise _Stop(Verdict("unsafe", trace=self._trace(cur)))
            cfg = self.config
            s = cur.state
            ordered = reorder(ctx, s, l + 1, cfg)
            res = self._query(ordered, l)
            if res.satisfiable:
                model = res.model
                t = tuple(v if model[p] else -v for v, p in zip(enc.state_vars, enc.next_vars))
                inputs = tuple(model[v] for v in enc.input_vars)
                if l == 0:
                    self._bad_inputs = tuple(model[v] for v in enc.next_input_vars)
                child, _ = self.useq.add(t, cur.level + 1, cur, inputs)
                stack.append((child, l - 1))
                continue
            stack.pop()
            uc = res.core
            ctx.on_unsat(l + 1, uc, res.conflict_literal, cfg.promote_conflict)
            ctx.on_failed_state(l + 1, ordered)
            self.hooks.on_block(self, l + 1, uc, s)
            if frames.block(l + 1, uc) and l + 1 < len(frames):
                self._add_frame_clause(l + 1, uc)
            sset = frozenset(s)
            while l + 1 < len(frames) and frames.is_blocked(sset, l + 1):
                l += 1
            if l + 1 < len(frames):
                stack.append((cur, l))
        stats.record_proof(stats.queries - calls0, time.perf_counter() - t0)

    def _trace(self, last: UNode) -> List[TraceStep]:
        nodes = last.path()
        steps = []
        for k, n in enumerate(nodes):
            inputs = nodes[k + 1].inputs if k + 1 < len(nodes) else self._bad_inputs
            steps.append(TraceStep(self._bits(n.state), inputs))
        return steps


def check(model: AigModel, config: OrderingConfig = OrderingConfig(), budget: Optional[float] = None,
          **kwargs) -> Verdict:
    return CarEngine(model, config, **kwargs).check(budget)


def hybrid_check(model: AigModel, hcfg: HybridConfig = HybridConfig(), **kwargs) -> Verdict:
    return CarEngine(model, hcfg.base, **kwargs).hybrid_check(hcfg)
