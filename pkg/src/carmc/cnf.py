"""Tseitin encoding of an AIGER transition relation.

Variable layout (all DIMACS-style positive integers):

* ``1..M``          AIGER variables (inputs, latches, AND gates), unchanged;
* ``M+1``           constant TRUE, asserted by a unit clause;
* next block        one primed variable per latch (``V'``);
* primed bad cone   a copy of the combinational logic feeding the bad
                    literal, evaluated on ``V'`` with fresh inputs.  It
                    lets a frame at level 0 (the bad states) be stated over
                    next-state variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

from .aiger import AigModel, initial_cube

Cube = Tuple[int, ...]


def bad_literal(model: AigModel) -> Union[int, bool]:
    """Bad literal in encoder space; constants come back as ``True``/``False``."""
    lit = model.bad
    if lit < 2:
        return bool(lit)
    return -(lit >> 1) if lit & 1 else lit >> 1


@dataclass(frozen=True)
class Encoding:
    state_vars: Tuple[int, ...]
    next_vars: Tuple[int, ...]
    input_vars: Tuple[int, ...]
    gate_vars: Tuple[int, ...]
    true_var: int
    trans_clauses: Tuple[Tuple[int, ...], ...]
    bad: int  # over current state and inputs
    bad_next: int  # over next state and next_input_vars
    next_input_vars: Tuple[int, ...]
    bad_clauses: Tuple[Tuple[int, ...], ...]  # definitions of the primed cone
    num_vars: int
    prime_map: Dict[int, int]

    def prime(self, cube: Sequence[int]) -> Cube:
        """Map a cube or clause over ``V`` to ``V'``, keeping polarity."""
        pm = self.prime_map
        out = []
        for lit in cube:
            v = pm.get(abs(lit))
            if v is None:
                raise ValueError(f"literal {lit} is not a present-state literal")
            out.append(v if lit > 0 else -v)
        return tuple(out)

    def unprime(self, cube: Sequence[int]) -> Cube:
        inv = self._inverse
        out = []
        for lit in cube:
            v = inv.get(abs(lit))
            if v is None:
                raise ValueError(f"literal {lit} is not a next-state literal")
            out.append(v if lit > 0 else -v)
        return tuple(out)

    @property
    def _inverse(self) -> Dict[int, int]:
        inv = self.__dict__.get("_inv")
        if inv is None:
            inv = {p: v for v, p in self.prime_map.items()}
            object.__setattr__(self, "_inv", inv)
        return inv

    def combinational_clauses(self) -> List[Tuple[int, ...]]:
        """Gate definitions plus the TRUE unit, without the latch next-state links."""
        latch_links = 2 * len(self.state_vars)
        return list(self.trans_clauses[: len(self.trans_clauses) - latch_links])

    def to_dimacs(self, include_bad_cone: bool = False) -> str:
        clauses = list(self.trans_clauses)
        if include_bad_cone:
            clauses += self.bad_clauses
        lines = [f"p cnf {self.num_vars} {len(clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in clauses]
        return "\n".join(lines) + "\n"


def _and_clauses(g: int, a: int, b: int) -> List[Tuple[int, ...]]:
    return [(-g, a), (-g, b), (g, -a, -b)]


def encode(model: AigModel) -> Encoding:
    M = model.max_var_index
    true_var = M + 1

    def lit(aig_lit: int) -> int:
        v = aig_lit >> 1
        x = true_var if v == 0 else v
        # AIGER literal 0 is FALSE, i.e. the negation of TRUE
        if v == 0:
            return -x if aig_lit == 0 else x
        return -x if aig_lit & 1 else x

    clauses: List[Tuple[int, ...]] = [(true_var,)]
    for lhs, r0, r1 in model.ands:
        clauses += _and_clauses(lhs >> 1, lit(r0), lit(r1))

    state_vars = tuple(model.latch_vars())
    next_vars = tuple(range(true_var + 1, true_var + 1 + len(state_vars)))
    for (_, nxt, _), p in zip(model.latches, next_vars):
        f = lit(nxt)
        clauses += [(-p, f), (p, -f)]

    # primed copy of the bad cone
    top = next_vars[-1] if next_vars else true_var
    mapping: Dict[int, int] = {0: true_var}
    for v, p in zip(state_vars, next_vars):
        mapping[v] = p
    next_inputs = []
    for v in model.input_vars():
        top += 1
        mapping[v] = top
        next_inputs.append(top)
    cone = _cone(model, model.bad >> 1)
    bad_clauses: List[Tuple[int, ...]] = []
    for lhs, r0, r1 in model.ands:
        if lhs >> 1 not in cone:
            continue
        top += 1
        mapping[lhs >> 1] = top

        def plit(aig_lit: int) -> int:
            x = mapping[aig_lit >> 1]
            if aig_lit >> 1 == 0:
                return -x if aig_lit == 0 else x
            return -x if aig_lit & 1 else x

        bad_clauses += _and_clauses(top, plit(r0), plit(r1))
    bv = model.bad >> 1
    bad_next = mapping.get(bv, true_var)
    if model.bad == 0 or (bv and model.bad & 1):
        bad_next = -bad_next

    return Encoding(
        state_vars=state_vars,
        next_vars=next_vars,
        input_vars=tuple(model.input_vars()),
        gate_vars=tuple(lhs >> 1 for lhs, _, _ in model.ands),
        true_var=true_var,
        trans_clauses=tuple(clauses),
        bad=lit(model.bad),
        bad_next=bad_next,
        next_input_vars=tuple(next_inputs),
        bad_clauses=tuple(bad_clauses),
        num_vars=top,
        prime_map=dict(zip(state_vars, next_vars)),
    )


def _cone(model: AigModel, root: int) -> set:
    """AND-gate variables in the transitive fan-in of variable ``root``."""
    gates = {lhs >> 1: (r0 >> 1, r1 >> 1) for lhs, r0, r1 in model.ands}
    seen = set()
    todo = [root]
    while todo:
        v = todo.pop()
        if v in seen or v not in gates:
            continue
        seen.add(v)
        todo.extend(gates[v])
    return seen


def prime(encoding: Encoding, cube: Sequence[int]) -> Cube:
    return encoding.prime(cube)


def not_initial_clause(model: AigModel) -> Tuple[int, ...]:
    """The clause ``not I``; empty for a latch-free model (``not I`` is false)."""
    return tuple(-lit for lit in initial_cube(model))
