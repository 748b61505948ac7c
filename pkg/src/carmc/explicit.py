"""Explicit-state reachability for small circuits.

Enumerates every latch valuation and input vector, so it is only meant
for models with a handful of latches and inputs; it is the reference the
symbolic engine is checked against.
"""

from __future__ import annotations

from collections import deque
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .aiger import AigModel, bits_to_cube, reset_state, step

State = Tuple[bool, ...]


def all_states(n: int) -> Iterable[State]:
    return product((False, True), repeat=n)


def successors(model: AigModel, state: State) -> Dict[State, Tuple[bool, ...]]:
    """Map each successor of ``state`` to one input vector producing it."""
    out: Dict[State, Tuple[bool, ...]] = {}
    for inputs in product((False, True), repeat=model.num_inputs):
        nxt, _ = step(model, state, inputs)
        out.setdefault(nxt, inputs)
    return out


def bad_inputs(model: AigModel, state: State) -> Optional[Tuple[bool, ...]]:
    for inputs in product((False, True), repeat=model.num_inputs):
        if step(model, state, inputs)[1]:
            return inputs
    return None


def bad_set(model: AigModel) -> Set[State]:
    return {s for s in all_states(model.num_latches) if bad_inputs(model, s) is not None}


def bfs(model: AigModel):
    """Shortest counterexample as ``[(state, inputs), ...]``, or None if safe."""
    init = reset_state(model)
    parent: Dict[State, Tuple[Optional[State], Tuple[bool, ...]]] = {init: (None, ())}
    queue = deque([init])
    while queue:
        s = queue.popleft()
        bi = bad_inputs(model, s)
        if bi is not None:
            path = [(s, bi)]
            while parent[s][0] is not None:
                prev, inputs = parent[s]
                path.append((prev, inputs))
                s = prev
            return path[::-1]
        for t, inputs in successors(model, s).items():
            if t not in parent:
                parent[t] = (s, inputs)
                queue.append(t)
    return None


def reachable(model: AigModel) -> Set[State]:
    init = reset_state(model)
    seen = {init}
    queue = deque([init])
    while queue:
        s = queue.popleft()
        for t in successors(model, s):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def frame_states(model: AigModel, cubes: Sequence[Sequence[int]]) -> Set[State]:
    """States of ``not I and not c`` for every cube ``c`` (a frame at level >= 1)."""
    init = reset_state(model)
    sets = [frozenset(c) for c in cubes]
    out = set()
    for s in all_states(model.num_latches):
        if s == init:
            continue
        lits = frozenset(bits_to_cube(model, s))
        if not any(c <= lits for c in sets):
            out.add(s)
    return out


def invariant_level(model: AigModel, frames: Sequence[Sequence[Sequence[int]]]) -> Optional[int]:
    """Least ``i >= 1`` with ``O_{i+1}`` inside ``O_0 | ... | O_i`` by set inclusion.

    ``frames[0]`` is ignored (level 0 is the bad set)."""
    sets: List[Set[State]] = [bad_set(model)]
    sets += [frame_states(model, f) for f in frames[1:]]
    union = set(sets[0])
    for i in range(1, len(sets) - 1):
        union |= sets[i]
        if sets[i + 1] <= union:
            return i
    return None
