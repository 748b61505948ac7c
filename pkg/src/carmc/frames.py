"""Over-approximating (O) and under-approximating (U) state sequences.

An O-frame at level ``l >= 1`` stands for ``not I and not c1 and not c2 ...``
where ``c1, c2, ...`` are the stored blocking cubes.  Level 0 is the set
of bad states and never stores cubes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Sequence, Tuple

from .cnf import Encoding
from .sat import Solver

Cube = Tuple[int, ...]


class Frame:
    __slots__ = ("cubes", "_sets")

    def __init__(self):
        self.cubes: List[Cube] = []
        self._sets: List[frozenset] = []

    def add(self, cube: Sequence[int]) -> bool:
        s = frozenset(cube)
        for existing in self._sets:
            if existing <= s:
                return False
        self.cubes.append(tuple(cube))
        self._sets.append(s)
        return True

    def blocks(self, state: frozenset) -> bool:
        return any(c <= state for c in self._sets)

    def __len__(self):
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)


class OFrames:
    def __init__(self, init: Sequence[int]):
        self.init: Cube = tuple(init)
        self._init_set = frozenset(self.init)
        self.levels: List[Optional[Frame]] = [None]  # level 0 is the bad set
        self.o_tmp = Frame()

    def __len__(self) -> int:
        return len(self.levels)

    def block(self, level: int, cube: Sequence[int]) -> bool:
        """Conjoin ``not cube`` to frame ``level`` (or to the pending frame when
        ``level == len(self)``).  Returns False if an existing cube subsumes it."""
        if level < 1:
            raise ValueError("level 0 (the bad states) cannot be narrowed")
        if level < len(self.levels):
            return self.levels[level].add(cube)
        if level == len(self.levels):
            return self.o_tmp.add(cube)
        raise ValueError(f"level {level} beyond the pending frame {len(self.levels)}")

    def is_blocked(self, state: Sequence[int], level: int) -> bool:
        """True iff the full state lies outside frame ``level`` (``level >= 1``)."""
        s = state if isinstance(state, frozenset) else frozenset(state)
        if s == self._init_set or (self._init_set and self._init_set <= s):
            return True
        return self.levels[level].blocks(s)

    def new_frame(self) -> int:
        self.levels.append(self.o_tmp)
        self.o_tmp = Frame()
        return len(self.levels) - 1

    def reset_tmp(self) -> None:
        self.o_tmp = Frame()

    def snapshot(self) -> Tuple[Tuple[Cube, ...], ...]:
        return tuple(tuple(f.cubes) if f is not None else () for f in self.levels)

    def dump(self) -> str:
        """DIMACS-like listing: one ``c level k`` block of blocking clauses per frame."""
        out = ["c level 0 (bad states)"]
        neg_init = " ".join(str(-x) for x in self.init)
        for k, frame in enumerate(self.levels[1:], start=1):
            out.append(f"c level {k}")
            out.append(f"{neg_init} 0" if neg_init else "0")
            out += [" ".join(str(-x) for x in c) + " 0" for c in frame.cubes]
        return "\n".join(out) + "\n"


class BadStates:
    """Membership test for the bad set ``{s | exists inputs: bad(s, inputs)}``.

    When a state is bad, a generalising cube is returned: every state
    containing it is bad under the same inputs.  Found cubes are cached.
    """

    def __init__(self, encoding: Encoding):
        self.enc = encoding
        self.solver = Solver(encoding.true_var)
        for c in encoding.combinational_clauses():
            self.solver.add_clause(c)
        self.cubes: List[Cube] = []

    def generalize(self, state: Sequence[int]) -> Optional[Cube]:
        enc = self.enc
        res = self.solver.solve(list(state) + [enc.bad])
        if not res.satisfiable:
            return None
        inputs = [v if res.model[v] else -v for v in enc.input_vars]
        res2 = self.solver.solve(inputs + list(state) + [-enc.bad])
        assert not res2.satisfiable, "bad is a function of state and inputs"
        members = set(state)
        cube = tuple(x for x in res2.core if x in members)
        self.cubes.append(cube)
        return cube


def invariant_check(frames: OFrames, encoding: Encoding, bad_states: Optional[BadStates] = None) -> Optional[int]:
    """Least ``i >= 1`` with ``O_{i+1}`` contained in ``O_0 | ... | O_i``, else None."""
    if bad_states is None:
        bad_states = BadStates(encoding)
    for i in range(1, len(frames) - 1):
        if _contained(frames, i, encoding, bad_states):
            return i
    return None


def _contained(frames: OFrames, i: int, enc: Encoding, bad_states: BadStates) -> bool:
    solver = Solver(enc.true_var)
    init = frames.init
    # O_{i+1}
    if not solver.add_clause([-x for x in init]):
        return True
    for c in frames.levels[i + 1].cubes:
        if not solver.add_clause([-x for x in c]):
            return True
    # not O_j for 1 <= j <= i: I or one of the stored cubes
    for j in range(1, i + 1):
        cubes = [init] + list(frames.levels[j].cubes)
        if any(len(c) == 0 for c in cubes):
            continue  # O_j is empty, its complement is everything
        selectors = []
        for c in cubes:
            x = solver.new_var()
            selectors.append(x)
            for lit in c:
                solver.add_clause([-x, lit])
        if not solver.add_clause(selectors):
            return True
    # not O_0, refined lazily with cubes of bad states
    for c in bad_states.cubes:
        solver.add_clause([-x for x in c])
    while True:
        res = solver.solve()
        if not res.satisfiable:
            return True
        state = tuple(v if res.model[v] else -v for v in enc.state_vars)
        cube = bad_states.generalize(state)
        if cube is None:
            return False
        if not solver.add_clause([-x for x in cube]):
            return True


@dataclass(eq=False)
class UNode:
    state: Cube
    level: int
    parent: Optional["UNode"] = None
    inputs: Tuple[bool, ...] = ()  # inputs on the transition from the parent
    index: int = 0

    def path(self) -> List["UNode"]:
        nodes = []
        n = self
        while n is not None:
            nodes.append(n)
            n = n.parent
        return nodes[::-1]


class USequence:
    def __init__(self, init: Sequence[int], oldest_first: bool = False):
        self.oldest_first = oldest_first
        self.levels: List[List[UNode]] = []
        self._index: List[Dict[Cube, UNode]] = []
        self._pending: List[Deque[UNode]] = []
        self._count = 0
        self._add_node(UNode(tuple(init), 0))

    def _add_node(self, node: UNode) -> None:
        while len(self.levels) <= node.level:
            self.levels.append([])
            self._index.append({})
            self._pending.append(deque())
        node.index = self._count
        self._count += 1
        self.levels[node.level].append(node)
        self._index[node.level][node.state] = node
        self._pending[node.level].append(node)

    def __len__(self) -> int:
        return self._count

    @property
    def root(self) -> UNode:
        return self.levels[0][0]

    def add(self, state: Sequence[int], level: int, parent: UNode, inputs: Sequence[bool] = ()) -> Tuple[UNode, bool]:
        """Widen ``U_level`` with ``state``; duplicates at a level are stored once."""
        if level < 1:
            raise ValueError("U_0 holds only the initial state")
        if parent.level != level - 1:
            raise ValueError("parent must sit one level below the new state")
        state = tuple(state)
        if level < len(self._index) and state in self._index[level]:
            return self._index[level][state], False
        node = UNode(state, level, parent, tuple(inputs))
        self._add_node(node)
        return node, True

    def start_round(self) -> None:
        for lvl, nodes in enumerate(self.levels):
            self._pending[lvl] = deque(nodes)

    def pick(self) -> Optional[UNode]:
        """Next unvisited state of this round: deepest level first, newest first."""
        for lvl in range(len(self._pending) - 1, -1, -1):
            q = self._pending[lvl]
            if q:
                return q.popleft() if self.oldest_first else q.pop()
        return None

    def reset(self) -> None:
        """Keep only ``U_0``."""
        root = self.root
        self.levels = [[root]]
        self._index = [{root.state: root}]
        self._pending = [deque([root])]
        self._count = 1

    def snapshot(self) -> List[List[Cube]]:
        return [[n.state for n in lvl] for lvl in self.levels]
