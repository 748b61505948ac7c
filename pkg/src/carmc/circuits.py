"""Small AIG construction kit, a few classic sequential circuits and a
random circuit generator (used for oracle testing and the demos)."""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Sequence, Tuple

from .aiger import AigModel

FALSE, TRUE = 0, 1


def neg(lit: int) -> int:
    return lit ^ 1


class AigBuilder:
    """Allocate inputs, latches and AND gates; latch next-state functions are
    set after their fan-in exists, so feedback loops are easy to write."""

    def __init__(self):
        self._n_inputs = 0
        self._latch_specs: List[List[int]] = []  # [placeholder var, next, reset]
        self._ands: List[Tuple[int, int, int]] = []  # over placeholder vars
        self._strash: Dict[Tuple[int, int], int] = {}
        self._next_var = 0
        self._kind: Dict[int, Tuple[str, int]] = {}

    def _fresh(self, kind: str, idx: int) -> int:
        self._next_var += 1
        self._kind[self._next_var] = (kind, idx)
        return 2 * self._next_var

    def input(self) -> int:
        lit = self._fresh("i", self._n_inputs)
        self._n_inputs += 1
        return lit

    def latch(self, reset: int = 0) -> int:
        lit = self._fresh("l", len(self._latch_specs))
        self._latch_specs.append([lit, FALSE, reset])
        return lit

    def set_next(self, latch: int, nxt: int) -> None:
        for spec in self._latch_specs:
            if spec[0] == latch:
                spec[1] = nxt
                return
        raise KeyError(latch)

    def and_(self, a: int, b: int) -> int:
        if a == FALSE or b == FALSE or a == neg(b):
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE or a == b:
            return a
        key = (max(a, b), min(a, b))
        if key in self._strash:
            return self._strash[key]
        lit = self._fresh("a", len(self._ands))
        self._ands.append((lit, key[0], key[1]))
        self._strash[key] = lit
        return lit

    def or_(self, a: int, b: int) -> int:
        return neg(self.and_(neg(a), neg(b)))

    def xor(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, neg(b)), self.and_(neg(a), b))

    def all_of(self, lits: Sequence[int]) -> int:
        out = TRUE
        for lit in lits:
            out = self.and_(out, lit)
        return out

    def any_of(self, lits: Sequence[int]) -> int:
        return neg(self.all_of([neg(x) for x in lits]))

    def build(self, bad: int) -> AigModel:
        """Renumber to AIGER order: inputs, then latches, then ANDs."""
        n_in, n_l = self._n_inputs, len(self._latch_specs)
        remap = {0: 0}
        for var, (kind, idx) in self._kind.items():
            base = {"i": 0, "l": n_in, "a": n_in + n_l}[kind]
            remap[var] = base + idx + 1

        def m(lit: int) -> int:
            return 2 * remap[lit >> 1] + (lit & 1)

        ands = []
        for lhs, r0, r1 in self._ands:
            a, b = m(r0), m(r1)
            ands.append((m(lhs), max(a, b), min(a, b)))
        return AigModel(
            max_var_index=self._next_var,
            inputs=tuple(2 * (k + 1) for k in range(n_in)),
            latches=tuple((m(l), m(n), r) for l, n, r in self._latch_specs),
            ands=tuple(ands),
            outputs=(m(bad),),
        )


def _equals(b: AigBuilder, bits: Sequence[int], value: int) -> int:
    return b.all_of([bit if (value >> k) & 1 else neg(bit) for k, bit in enumerate(bits)])


def toggler(bad_when_set: bool = True) -> AigModel:
    """A latch flipping every cycle.

    With ``bad_when_set`` the bad state is the latch being 1 (reachable).
    Otherwise a second latch flips in lockstep and bad is the two
    disagreeing, which never happens."""
    b = AigBuilder()
    x = b.latch()
    b.set_next(x, neg(x))
    if bad_when_set:
        return b.build(x)
    y = b.latch()
    b.set_next(y, neg(y))
    return b.build(b.xor(x, y))


def stuck_latch() -> AigModel:
    """Latch that keeps its reset value 0; bad when it is 1 (unreachable)."""
    b = AigBuilder()
    x = b.latch()
    b.set_next(x, x)
    return b.build(x)


def counter(width: int, bad_value: int, enable: bool = False, wrap_at: Optional[int] = None) -> AigModel:
    """Binary up-counter from 0; bad when it equals ``bad_value``.

    With ``enable`` an input gates each increment; with ``wrap_at`` the
    counter resets to 0 after reaching that value (making larger values
    unreachable)."""
    b = AigBuilder()
    bits = [b.latch() for _ in range(width)]
    carry = b.input() if enable else TRUE
    wrap = _equals(b, bits, wrap_at) if wrap_at is not None else FALSE
    for bit in bits:
        nxt = b.xor(bit, carry)
        carry = b.and_(bit, carry)
        b.set_next(bit, b.and_(nxt, neg(wrap)))
    return b.build(_equals(b, bits, bad_value))


def shift_register(width: int, bad_all_ones: bool = True) -> AigModel:
    """Serial-in shift register fed by an input; bad when all bits are one.

    With ``bad_all_ones=False`` the fed bit is forced to zero, so the
    register stays zero and the property holds."""
    b = AigBuilder()
    d = b.input()
    bits = [b.latch() for _ in range(width)]
    feed = d if bad_all_ones else FALSE
    b.set_next(bits[0], feed)
    for prev, bit in zip(bits, bits[1:]):
        b.set_next(bit, prev)
    return b.build(b.all_of(bits))


def ring_counter(width: int) -> AigModel:
    """One-hot ring starting at bit 0; bad when two adjacent bits are hot (never)."""
    b = AigBuilder()
    bits = [b.latch(reset=1 if k == 0 else 0) for k in range(width)]
    for k, bit in enumerate(bits):
        b.set_next(bit, bits[k - 1])
    pairs = [b.and_(bits[k], bits[(k + 1) % width]) for k in range(width)]
    return b.build(b.any_of(pairs))


def mutual_exclusion() -> AigModel:
    """Two processes with a turn bit; bad when both are critical (never)."""
    b = AigBuilder()
    req0, req1 = b.input(), b.input()
    crit0, crit1, turn = b.latch(), b.latch(), b.latch()
    # a process may enter only on its turn when the other is out; leaving hands over the turn
    enter0 = b.all_of([req0, neg(turn), neg(crit1)])
    enter1 = b.all_of([req1, turn, neg(crit0)])
    b.set_next(crit0, b.or_(enter0, b.and_(crit0, req0)))
    b.set_next(crit1, b.or_(enter1, b.and_(crit1, req1)))
    leave0 = b.and_(crit0, neg(req0))
    leave1 = b.and_(crit1, neg(req1))
    b.set_next(turn, b.or_(b.and_(turn, neg(leave1)), leave0))
    return b.build(b.and_(crit0, crit1))


def hand_written() -> Dict[str, AigModel]:
    """The fixed regression suite: counters, togglers and shift registers."""
    return {
        "toggler_unsafe": toggler(True),
        "toggler_safe": toggler(False),
        "stuck_latch": stuck_latch(),
        "counter2_bad3": counter(2, 3),
        "counter3_bad7": counter(3, 7),
        "counter3_wrap5_bad6": counter(3, 6, wrap_at=5),
        "counter4_en_bad9": counter(4, 9, enable=True),
        "counter4_wrap9_bad12": counter(4, 12, wrap_at=9),
        "shift4_unsafe": shift_register(4, True),
        "shift4_safe": shift_register(4, False),
        "ring4": ring_counter(4),
        "ring5": ring_counter(5),
        "mutex": mutual_exclusion(),
    }


def random_model(rng: random.Random, max_latches: int = 8, max_inputs: int = 4, max_gates: int = 30) -> AigModel:
    """Random sequential circuit in AIGER order."""
    n_in = rng.randint(0, max_inputs)
    n_l = rng.randint(1, max_latches)
    n_bad = rng.randint(1, 3)
    n_a = rng.randint(0, max(0, max_gates - (n_bad - 1)))
    inputs = [2 * (k + 1) for k in range(n_in)]
    latch_lits = [2 * (n_in + k + 1) for k in range(n_l)]
    pool = inputs + latch_lits
    ands = []
    for k in range(n_a):
        lhs = 2 * (n_in + n_l + k + 1)
        a = rng.choice(pool) ^ rng.randint(0, 1)
        c = rng.choice(pool) ^ rng.randint(0, 1)
        ands.append((lhs, max(a, c), min(a, c)))
        pool.append(lhs)
    state_pool = latch_lits + [g for g, _, _ in ands]
    latches = []
    for lit in latch_lits:
        r = rng.random()
        if r < 0.05:
            nxt = rng.randint(0, 1)
        else:
            nxt = rng.choice(pool) ^ rng.randint(0, 1)
        latches.append((lit, nxt, 1 if rng.random() < 0.3 else 0))
    # bad: a conjunction over a few latch/gate literals keeps many instances non-trivial
    bad_lits = [rng.choice(state_pool) ^ rng.randint(0, 1) for _ in range(n_bad)]
    max_var = n_in + n_l + n_a
    bad = bad_lits[0]
    for lit in bad_lits[1:]:
        max_var += 1
        lhs = 2 * max_var
        ands.append((lhs, max(bad, lit), min(bad, lit)))
        bad = lhs
    return AigModel(
        max_var_index=max_var,
        inputs=tuple(inputs),
        latches=tuple(latches),
        ands=tuple(ands),
        outputs=(bad,),
    )
