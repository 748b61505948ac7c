# Building circuits, writing them as AIGER and stepping the simulator.
from carmc.aiger import parse_aiger, reset_state, step, to_aag
from carmc.circuits import AigBuilder, counter

# a 2-bit counter that is "bad" when it reaches 3
m = counter(2, 3)
text = to_aag(m)
print(text)

# the text parses back to the same model
assert parse_aiger(text) == m

# simulate four cycles from reset; step returns (next state, bad in this cycle)
s = reset_state(m)
for cycle in range(4):
    nxt, bad = step(m, s, ())
    print(f"cycle {cycle}: state={''.join('1' if b else '0' for b in s)} bad={int(bad)}")
    s = nxt

# the builder handles feedback: declare latches first, wire them up later
b = AigBuilder()
req = b.input()
busy = b.latch()
b.set_next(busy, b.or_(req, busy))
sticky = b.build(b.and_(busy, req ^ 1))
print(to_aag(sticky))
