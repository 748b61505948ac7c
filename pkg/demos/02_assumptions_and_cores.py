# Assumption order decides which unsatisfiable core the solver reports.
from carmc.sat import Solver

solver = Solver(5)
for clause in ([1, -4, -5], [3, -4, -5], [2, 4]):
    solver.add_clause(clause)

for order in ([-1, 2, 4, 5, -3], [5, 4, -3, 2, -1]):
    res = solver.solve(order)
    print(f"assume {order}: core={res.core} conflict literal={res.conflict_literal}")

# both cores are genuine: assuming only the core is already unsatisfiable
assert not solver.solve([-1, 4, 5]) and not solver.solve([5, 4, -3])

# the same solver answers satisfiable queries afterwards
res = solver.solve([1, 2])
print("sat model:", [v if res.model[v] else -v for v in range(1, 6)])
