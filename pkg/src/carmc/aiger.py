"""AIGER 1.0/1.9 reader and a gate-level simulator.

Only single safety properties are supported: either one ``bad`` line, or
(for 1.0 files without bad lines) exactly one output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union


class AigerError(ValueError):
    """Raised for malformed or unsupported AIGER input."""


@dataclass(frozen=True)
class AigModel:
    max_var_index: int
    inputs: Tuple[int, ...]
    latches: Tuple[Tuple[int, int, int], ...]  # (lit, next, reset)
    ands: Tuple[Tuple[int, int, int], ...]  # (lhs, rhs0, rhs1)
    outputs: Tuple[int, ...] = ()
    bads: Tuple[int, ...] = ()
    symbols: Dict[str, str] = field(default_factory=dict, compare=False)
    comments: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        _validate(self)

    @property
    def bad(self) -> int:
        """The AIGER literal of the single bad-state property."""
        return self.bads[0] if self.bads else self.outputs[0]

    @property
    def num_inputs(self) -> int:
        return len(self.inputs)

    @property
    def num_latches(self) -> int:
        return len(self.latches)

    def latch_vars(self) -> List[int]:
        return [lit >> 1 for lit, _, _ in self.latches]

    def input_vars(self) -> List[int]:
        return [lit >> 1 for lit in self.inputs]


def _validate(m: AigModel) -> None:
    top = 2 * m.max_var_index + 1

    def check_lit(lit: int, what: str) -> None:
        if lit < 0 or lit > top:
            raise AigerError(f"{what} literal {lit} out of range (max {top})")

    defined: Dict[int, str] = {}

    def define(lit: int, what: str) -> None:
        check_lit(lit, what)
        if lit < 2 or lit & 1:
            raise AigerError(f"{what} literal {lit} must be even and non-constant")
        var = lit >> 1
        if var in defined:
            raise AigerError(f"variable {var} defined twice ({defined[var]}, {what})")
        defined[var] = what

    for lit in m.inputs:
        define(lit, "input")
    for lit, nxt, reset in m.latches:
        define(lit, "latch")
        check_lit(nxt, "latch next")
        if reset not in (0, 1):
            raise AigerError(f"latch {lit}: unsupported reset value {reset}")
    for lhs, rhs0, rhs1 in m.ands:
        define(lhs, "and")
        check_lit(rhs0, "and input")
        check_lit(rhs1, "and input")
        if not lhs > rhs0 >= rhs1:
            raise AigerError(f"AND gate {lhs} = {rhs0} & {rhs1} is not topologically ordered")
    if len(defined) != m.max_var_index:
        raise AigerError(
            f"inputs, latches and ANDs define {len(defined)} variables, header declares {m.max_var_index}"
        )
    for lit in m.outputs + m.bads:
        check_lit(lit, "output")
    if len(m.bads) > 1:
        raise AigerError("multiple bad-state properties are not supported")
    if not m.bads and len(m.outputs) != 1:
        raise AigerError(f"expected exactly one property, found {len(m.outputs)} outputs and no bad lines")


# ---------------------------------------------------------------------------
# parsing


def parse_aiger(data: Union[bytes, str]) -> AigModel:
    """Parse ASCII (``aag``) or binary (``aig``) AIGER contents."""
    if isinstance(data, str):
        data = data.encode("ascii")
    nl = data.find(b"\n")
    header_line = data if nl < 0 else data[:nl]
    header = header_line.decode("ascii", errors="replace").split()
    if not header or header[0] not in ("aag", "aig"):
        raise AigerError("missing 'aag' or 'aig' header")
    try:
        nums = [int(x) for x in header[1:]]
    except ValueError:
        raise AigerError(f"malformed header: {header_line!r}") from None
    if len(nums) < 5 or len(nums) > 9 or any(n < 0 for n in nums):
        raise AigerError(f"malformed header: {header_line!r}")
    nums += [0] * (9 - len(nums))
    M, I, L, O, A, B, C, J, F = nums
    if C or J or F:
        raise AigerError("invariant constraints, justice and fairness sections are not supported")
    if I + L + A > M:
        raise AigerError("header: M < I + L + A")
    reader = _Reader(data, 0 if nl < 0 else nl + 1)
    binary = header[0] == "aig"

    inputs = []
    for k in range(I):
        if binary:
            inputs.append(2 * (k + 1))
        else:
            inputs.append(reader.ints(1, "input")[0])

    latches = []
    for k in range(L):
        vals = reader.ints(None, "latch")
        if binary:
            vals = [2 * (I + k + 1)] + vals
        if len(vals) == 2:
            vals.append(0)
        if len(vals) != 3:
            raise AigerError(f"malformed latch line {k}")
        lit, nxt, reset = vals
        if reset == lit:
            raise AigerError(f"latch {lit}: nondeterministic reset is not supported")
        latches.append((lit, nxt, reset))

    outputs = tuple(reader.ints(1, "output")[0] for _ in range(O))
    bads = tuple(reader.ints(1, "bad")[0] for _ in range(B))

    ands = []
    if binary:
        for k in range(A):
            lhs = 2 * (I + L + k + 1)
            d0 = reader.leb128()
            d1 = reader.leb128()
            rhs0 = lhs - d0
            rhs1 = rhs0 - d1
            if d0 == 0 or rhs1 < 0:
                raise AigerError(f"invalid delta encoding for AND gate {lhs}")
            ands.append((lhs, rhs0, rhs1))
    else:
        for _ in range(A):
            lhs, rhs0, rhs1 = reader.ints(3, "and")
            if rhs0 < rhs1:
                rhs0, rhs1 = rhs1, rhs0
            ands.append((lhs, rhs0, rhs1))
        ands.sort()

    symbols, comments = reader.trailer()
    return AigModel(
        max_var_index=M,
        inputs=tuple(inputs),
        latches=tuple(latches),
        ands=tuple(ands),
        outputs=outputs,
        bads=bads,
        symbols=symbols,
        comments=tuple(comments),
    )


def read_aiger(path) -> AigModel:
    with open(path, "rb") as fh:
        return parse_aiger(fh.read())


class _Reader:
    def __init__(self, data: bytes, pos: int):
        self.data = data
        self.pos = pos

    def line(self, what: str) -> str:
        if self.pos >= len(self.data):
            raise AigerError(f"unexpected end of file while reading {what}")
        end = self.data.find(b"\n", self.pos)
        if end < 0:
            end = len(self.data)
        raw = self.data[self.pos:end]
        self.pos = end + 1
        return raw.decode("ascii", errors="replace")

    def ints(self, count: Optional[int], what: str) -> List[int]:
        text = self.line(what)
        try:
            vals = [int(x) for x in text.split()]
        except ValueError:
            raise AigerError(f"malformed {what} line: {text!r}") from None
        if count is not None and len(vals) != count:
            raise AigerError(f"malformed {what} line: {text!r}")
        if any(v < 0 for v in vals):
            raise AigerError(f"negative literal in {what} line")
        return vals

    def leb128(self) -> int:
        x = 0
        shift = 0
        while True:
            if self.pos >= len(self.data):
                raise AigerError("unexpected end of file in binary AND section")
            b = self.data[self.pos]
            self.pos += 1
            x |= (b & 0x7F) << shift
            if not b & 0x80:
                return x
            shift += 7

    def trailer(self) -> Tuple[Dict[str, str], List[str]]:
        symbols: Dict[str, str] = {}
        comments: List[str] = []
        while self.pos < len(self.data):
            text = self.line("symbol table")
            if text == "c":
                rest = self.data[self.pos:].decode("utf-8", errors="replace")
                comments = rest.splitlines()
                break
            if not text.strip():
                continue
            key, _, name = text.partition(" ")
            if len(key) < 2 or key[0] not in "ilobcjf" or not key[1:].isdigit():
                raise AigerError(f"malformed symbol table entry: {text!r}")
            symbols[key] = name
        return symbols, comments


def to_aag(model: AigModel) -> str:
    """Pretty-print as ASCII AIGER; re-parsing yields an equal model."""
    m = model
    header = [m.max_var_index, m.num_inputs, m.num_latches, len(m.outputs), len(m.ands)]
    if m.bads:
        header.append(len(m.bads))
    lines = ["aag " + " ".join(map(str, header))]
    lines += [str(i) for i in m.inputs]
    for lit, nxt, reset in m.latches:
        lines.append(f"{lit} {nxt}" + (f" {reset}" if reset else ""))
    lines += [str(o) for o in m.outputs]
    lines += [str(b) for b in m.bads]
    lines += [f"{lhs} {r0} {r1}" for lhs, r0, r1 in m.ands]
    order = {c: k for k, c in enumerate("ilob")}
    for key in sorted(m.symbols, key=lambda s: (order.get(s[0], 9), int(s[1:]))):
        lines.append(f"{key} {m.symbols[key]}")
    if m.comments:
        lines.append("c")
        lines += list(m.comments)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# semantics


def initial_cube(model: AigModel) -> Tuple[int, ...]:
    """Reset state as a cube over latch variables (one literal per latch)."""
    return tuple((lit >> 1) if reset else -(lit >> 1) for lit, _, reset in model.latches)


def eval_lit(values: Sequence[bool], lit: int) -> bool:
    return values[lit >> 1] ^ bool(lit & 1)


def evaluate(model: AigModel, state: Sequence[bool], inputs: Sequence[bool]) -> List[bool]:
    """Value of every AIGER variable (index 0 is the constant false)."""
    if len(state) != model.num_latches or len(inputs) != model.num_inputs:
        raise ValueError("state/input arity does not match the circuit")
    values = [False] * (model.max_var_index + 1)
    for lit, v in zip(model.inputs, inputs):
        values[lit >> 1] = bool(v)
    for (lit, _, _), v in zip(model.latches, state):
        values[lit >> 1] = bool(v)
    for lhs, r0, r1 in model.ands:
        values[lhs >> 1] = (values[r0 >> 1] ^ bool(r0 & 1)) and (values[r1 >> 1] ^ bool(r1 & 1))
    return values


def step(model: AigModel, state: Sequence[bool], inputs: Sequence[bool]) -> Tuple[Tuple[bool, ...], bool]:
    """One clock cycle: returns (next latch values, bad value in the current cycle)."""
    values = evaluate(model, state, inputs)
    nxt = tuple(eval_lit(values, n) for _, n, _ in model.latches)
    return nxt, eval_lit(values, model.bad)


def reset_state(model: AigModel) -> Tuple[bool, ...]:
    return tuple(bool(reset) for _, _, reset in model.latches)


def cube_to_bits(model: AigModel, cube: Iterable[int]) -> Tuple[bool, ...]:
    """Convert a full cube over latch variables into latch-ordered values."""
    pos = {v: k for k, v in enumerate(model.latch_vars())}
    bits = [None] * model.num_latches
    for lit in cube:
        bits[pos[abs(lit)]] = lit > 0
    if any(b is None for b in bits):
        raise ValueError("cube does not assign every latch")
    return tuple(bits)


def bits_to_cube(model: AigModel, bits: Sequence[bool]) -> Tuple[int, ...]:
    return tuple(v if b else -v for v, b in zip(model.latch_vars(), bits))
