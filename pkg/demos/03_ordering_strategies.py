# How each strategy reorders a state cube given the recorded history.
from carmc.reorder import OrderingConfig, ReorderContext, Strategy, reorder

ctx = ReorderContext()
level = 1
# two earlier cores at this level (newest last here), and the last failed state
ctx.on_unsat(level, (-4, 6), None)
ctx.on_unsat(level, (1, 2, 3), 3)  # conflict literal 3 is moved to the front
ctx.on_failed_state(level, (6, 5, -4, 1, 2, 3))

s = (1, 2, 3, -4, 5, 6)
for cfg in (
    OrderingConfig(Strategy.NATURAL),
    OrderingConfig(Strategy.INTERSECTION),
    OrderingConfig(Strategy.ROTATION),
    OrderingConfig(Strategy.COMBINATION),
    OrderingConfig(Strategy.LOCAL, 2),
):
    print(f"{cfg.name:>12}: {reorder(ctx, s, level, cfg)}")
