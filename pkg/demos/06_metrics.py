# Per-run statistics: query timings, core lengths, proofs and the per-round U growth.
from carmc.circuits import counter, mutual_exclusion
from carmc.engine import check
from carmc.metrics import round_table, summarize, to_csv
from carmc.reorder import OrderingConfig, Strategy

reports = []
for model_name, model in [("mutex", mutual_exclusion()), ("counter5", counter(5, 25, wrap_at=20))]:
    for strategy in (Strategy.NATURAL, Strategy.COMBINATION):
        v = check(model, OrderingConfig(strategy))
        reports.append(summarize(v.stats, model=model_name, strategy=strategy.value))

for r in reports:
    print(f"{r['model']:<9} {r['strategy']:<12} queries={r['queries']:<4} "
          f"avg UC={r['avg_uc_length']:.2f} avg calls/proof={r['avg_sat_calls_per_proof']:.2f}")

print()
print(round_table(reports[-1]))
print()
print(to_csv(reports))
