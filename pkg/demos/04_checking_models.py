# Checking the built-in models with every static strategy and replaying counterexamples.
from carmc.circuits import hand_written
from carmc.engine import check
from carmc.explicit import bfs
from carmc.reorder import OrderingConfig, Strategy
from carmc.witness import emit_witness, parse_witness, simulate

configs = [OrderingConfig(s) for s in (Strategy.NATURAL, Strategy.INTERSECTION, Strategy.ROTATION, Strategy.COMBINATION)]
configs += [OrderingConfig(Strategy.LOCAL, 3)]

for name, model in hand_written().items():
    verdicts = {cfg.name: check(model, cfg) for cfg in configs}
    statuses = {v.status for v in verdicts.values()}
    assert len(statuses) == 1, name
    v = verdicts["combination"]
    expected = "safe" if bfs(model) is None else "unsafe"
    line = f"{name:<22} {v.status:<6} (explicit search: {expected})"
    if v.unsafe:
        w = parse_witness(emit_witness(model, v.trace))
        line += f"  trace of {len(v.trace)} states, replays: {simulate(model, w)}"
    else:
        line += f"  invariant at level {v.level}"
    print(line)

print()
print(emit_witness(hand_written()["shift4_unsafe"], check(hand_written()["shift4_unsafe"]).trace))
