# Hybrid mode: a per-configuration timer triggers restarts that widen the locality.
import logging

from carmc.circuits import counter
from carmc.engine import CarEngine, HybridConfig, Hooks
from carmc.reorder import OrderingConfig, Strategy


class Report(Hooks):
    def on_restart(self, engine, event):
        print(f"restart: ilimit {event['ilimit_before']} -> {event['ilimit_after']}, "
              f"|U|={event['u_size_after']}, frames kept={event['frames_unchanged']}, "
              f"next limit {event['time_limit'] * 1000:.0f} ms")


logging.basicConfig(level=logging.INFO, format="  %(message)s")
model = counter(6, 50, wrap_at=40)
engine = CarEngine(model, OrderingConfig(Strategy.LOCAL, 1), hooks=Report())
verdict = engine.hybrid_check(HybridConfig(time_limit=0.002, growth=2.0))
print(verdict.status, "after", verdict.stats.restarts, "restarts; final config", engine.config.name)
