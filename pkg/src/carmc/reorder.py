"""Assumption-ordering strategies for the CAR state queries.

All strategies return a permutation of the state cube.  They draw on a
per-level history: the most recent unsatisfiable cores (newest first) and
the "common vector", i.e. the last failed assumption order at that level,
whose prefix accumulates the intersection of consecutive failed states.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, replace
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Tuple

Cube = Tuple[int, ...]


class Strategy(str, enum.Enum):
    NATURAL = "natural"
    INTERSECTION = "intersection"
    ROTATION = "rotation"
    COMBINATION = "combination"
    LOCAL = "local"


@dataclass(frozen=True)
class OrderingConfig:
    strategy: Strategy = Strategy.COMBINATION
    ilimit: int = 1
    promote_conflict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.ilimit < 1:
            raise ValueError("ilimit must be >= 1")

    @property
    def name(self) -> str:
        if self.strategy is Strategy.LOCAL:
            return f"local({self.ilimit})"
        return self.strategy.value

    def next_config(self) -> "OrderingConfig":
        """Hybrid switching rule: widen the locality by one more core."""
        return replace(self, strategy=Strategy.LOCAL, ilimit=self.ilimit + 1)


class LevelHistory:
    __slots__ = ("ucs", "common")

    def __init__(self, capacity: int):
        self.ucs: Deque[Cube] = deque(maxlen=capacity)  # newest at index 0
        self.common: Cube = ()


class ReorderContext:
    def __init__(self, capacity: int = 8):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._levels: Dict[int, LevelHistory] = {}

    def level(self, level: int) -> LevelHistory:
        h = self._levels.get(level)
        if h is None:
            h = self._levels[level] = LevelHistory(self.capacity)
        return h

    def last_uc(self, level: int) -> Cube:
        h = self._levels.get(level)
        return h.ucs[0] if h is not None and h.ucs else ()

    def kth_uc(self, level: int, k: int) -> Cube:
        """k-th most recent core at ``level`` (k = 1 is the newest); empty if absent."""
        h = self._levels.get(level)
        if h is None or k > len(h.ucs):
            return ()
        return h.ucs[k - 1]

    def common_vector(self, level: int) -> Cube:
        h = self._levels.get(level)
        return h.common if h is not None else ()

    def ensure_capacity(self, capacity: int) -> None:
        if capacity <= self.capacity:
            return
        self.capacity = capacity
        for h in self._levels.values():
            h.ucs = deque(h.ucs, maxlen=capacity)

    def on_unsat(self, level: int, core: Sequence[int], conflict_literal: Optional[int],
                 promote: bool = True) -> Cube:
        core = tuple(core)
        if promote and conflict_literal is not None and core and core[0] != conflict_literal:
            core = (conflict_literal,) + tuple(x for x in core if x != conflict_literal)
        self.level(level).ucs.appendleft(core)
        return core

    def on_failed_state(self, level: int, ordered_state: Sequence[int]) -> None:
        self.level(level).common = tuple(ordered_state)

    def clear(self) -> None:
        self._levels.clear()


def _place(out: List[int], placed: set, source: Iterable[int], members: set) -> None:
    for lit in source:
        if lit in members and lit not in placed:
            placed.add(lit)
            out.append(lit)


def _finish(out: List[int], placed: set, s: Sequence[int]) -> Cube:
    if len(out) == len(s):
        return tuple(out)
    out.extend(lit for lit in s if lit not in placed)
    return tuple(out)


def order_intersection(ctx: ReorderContext, s: Sequence[int], level: int) -> Cube:
    out: List[int] = []
    placed: set = set()
    _place(out, placed, ctx.last_uc(level), set(s))
    return _finish(out, placed, s)


def order_rotation(ctx: ReorderContext, s: Sequence[int], level: int) -> Cube:
    out: List[int] = []
    placed: set = set()
    _place(out, placed, ctx.common_vector(level), set(s))
    return _finish(out, placed, s)


def order_local(ctx: ReorderContext, s: Sequence[int], level: int, ilimit: int) -> Cube:
    """Intersections with the ``ilimit`` newest cores (newest first), then the
    common vector, then the rest of ``s`` in its own order."""
    if ilimit < 1:
        raise ValueError("ilimit must be >= 1")
    members = set(s)
    out: List[int] = []
    placed: set = set()
    for k in range(1, ilimit + 1):
        _place(out, placed, ctx.kth_uc(level, k), members)
    _place(out, placed, ctx.common_vector(level), members)
    return _finish(out, placed, s)


def reorder(ctx: ReorderContext, s: Sequence[int], level: int, cfg: OrderingConfig) -> Cube:
    strategy = cfg.strategy
    if strategy is Strategy.NATURAL:
        return tuple(s)
    if strategy is Strategy.INTERSECTION:
        return order_intersection(ctx, s, level)
    if strategy is Strategy.ROTATION:
        return order_rotation(ctx, s, level)
    if strategy is Strategy.COMBINATION:
        return order_local(ctx, s, level, 1)
    return order_local(ctx, s, level, cfg.ilimit)
