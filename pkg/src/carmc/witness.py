"""AIGER witness text (as read by ``aigsim``) and a replay checker.

Layout::

    1            status: property violated
    b0           which property
    0101         initial latch values
    10           one input vector per cycle; the last one exposes the bad state
    .
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .aiger import AigModel, step


@dataclass(frozen=True)
class WitnessTrace:
    initial: Tuple[bool, ...]
    inputs: Tuple[Tuple[bool, ...], ...]
    prop: str = "b0"


def _bits(values: Sequence[bool]) -> str:
    return "".join("1" if v else "0" for v in values)


def trace_to_witness(model: AigModel, trace) -> WitnessTrace:
    """Build a witness from the engine's ``[(state, inputs), ...]`` trace."""
    if not trace:
        raise ValueError("empty trace")
    steps = [(tuple(s.state), tuple(s.inputs)) if hasattr(s, "state") else (tuple(s[0]), tuple(s[1]))
             for s in trace]
    for k in range(len(steps) - 1):
        nxt, _ = step(model, steps[k][0], _pad(steps[k][1], model.num_inputs))
        if nxt != steps[k + 1][0]:
            raise ValueError(f"trace step {k} does not replay to step {k + 1}")
    inputs = tuple(_pad(i, model.num_inputs) for _, i in steps)
    return WitnessTrace(steps[0][0], inputs, "b0")


def _pad(inputs: Sequence[bool], n: int) -> Tuple[bool, ...]:
    # unconstrained inputs are reported as 0
    inputs = tuple(bool(x) for x in inputs)
    return inputs + (False,) * (n - len(inputs)) if len(inputs) < n else inputs


def format_witness(w: WitnessTrace) -> str:
    lines = ["1", w.prop, _bits(w.initial)]
    lines += [_bits(i) for i in w.inputs]
    lines.append(".")
    return "\n".join(lines) + "\n"


def emit_witness(model: AigModel, trace) -> str:
    return format_witness(trace_to_witness(model, trace))


def parse_witness(text: str) -> WitnessTrace:
    # blank lines are meaningful: a circuit without inputs has empty input vectors
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[0]:
        lines.pop(0)
    if "." not in lines:
        raise ValueError("witness lacks the '.' terminator")
    lines = lines[: lines.index(".") + 1]
    if len(lines) < 4 or lines[0] != "1":
        raise ValueError("not a counterexample witness")
    prop = lines[1]

    def bits(s: str) -> Tuple[bool, ...]:
        if any(ch not in "01x" for ch in s):
            raise ValueError(f"bad bit string {s!r}")
        return tuple(ch == "1" for ch in s)

    return WitnessTrace(bits(lines[2]), tuple(bits(s) for s in lines[3:-1]), prop)


def simulate(model: AigModel, w: WitnessTrace) -> bool:
    """Replay the witness; True iff the bad literal fires in some cycle."""
    if len(w.initial) != model.num_latches:
        raise ValueError("initial state arity does not match the latch count")
    state = w.initial
    for inputs in w.inputs:
        if len(inputs) != model.num_inputs:
            raise ValueError("input vector arity does not match the input count")
        state, bad = step(model, state, inputs)
        if bad:
            return True
    return False
