"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The per-criterion summary is also written at the end of the pytest run by
the hook in ``conftest.py``.
"""

import math
import random
import shutil
import subprocess
import time
from collections import Counter
from itertools import product
from statistics import fmean

import pytest

from carmc.aiger import step, to_aag
from carmc.circuits import counter, hand_written
from carmc.engine import CarEngine, HybridConfig
from carmc.explicit import all_states, bad_set, frame_states, invariant_level
from carmc.metrics import RunStats, round_table, summarize
from carmc.reorder import OrderingConfig, ReorderContext, Strategy, order_intersection, order_local, reorder
from carmc.sat import Solver
from carmc.witness import emit_witness, parse_witness, simulate

from oracles import brute_force_sat, corpus, random_cnf, shortest_cex_depth

STATIC = [
    OrderingConfig(Strategy.NATURAL),
    OrderingConfig(Strategy.INTERSECTION),
    OrderingConfig(Strategy.ROTATION),
    OrderingConfig(Strategy.COMBINATION),
] + [OrderingConfig(Strategy.LOCAL, k) for k in (2, 3, 4, 5)]
HYBRID_10MS = HybridConfig(time_limit=0.010)
CONFIG_NAMES = [c.name for c in STATIC] + ["hybrid(10ms)", "hybrid(10ms,simulated clock)"]


def _say(request, number, ok, detail):
    request.node.user_properties.append(("detail", detail))
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")


def _run(model, cfg, **kw):
    eng = CarEngine(model, cfg if isinstance(cfg, OrderingConfig) else cfg.base, **kw)
    verdict = eng.hybrid_check(cfg) if isinstance(cfg, HybridConfig) else eng.check()
    return eng, verdict


@pytest.fixture(scope="module")
def suite():
    models = corpus(200, seed=2024, max_latches=8, max_inputs=4, max_gates=30)
    assert len(models) >= 210
    oracle = {name: shortest_cex_depth(m) for name, m in models}
    runs = []
    t0 = time.perf_counter()
    for name, m in models:
        for cfg, cname in zip(STATIC + [HYBRID_10MS, HYBRID_10MS], CONFIG_NAMES):
            # the last variant reads a clock advancing 4 ms per obligation so restarts really happen
            kw = {"clock": _TickClock(0.004)} if "simulated" in cname else {}
            eng, v = _run(m, cfg, **kw)
            runs.append((name, m, cname, eng, v))
    return {"models": models, "oracle": oracle, "runs": runs, "time": time.perf_counter() - t0}


@pytest.mark.criterion(1, "oracle equivalence over all strategy configurations")
def test_c1_oracle_equivalence(suite, request):
    mismatches = []
    for name, m, cname, _, v in suite["runs"]:
        expect = "safe" if suite["oracle"][name] is None else "unsafe"
        if v.status != expect:
            mismatches.append((name, cname, v.status, expect))
    n = len(suite["runs"])
    counts = Counter(v.status for *_, v in suite["runs"])
    restarts = sum(v.stats.restarts for _, _, cname, _, v in suite["runs"] if cname.startswith("hybrid"))
    ok = not mismatches and suite["time"] < 120
    _say(request, 1, ok, f"{n - len(mismatches)}/{n} agree ({dict(counts)}), "
         f"{restarts} hybrid restarts, {suite['time']:.1f}s")
    assert not mismatches, mismatches[:5]
    assert suite["time"] < 120


@pytest.mark.criterion(2, "every counterexample witness simulates")
def test_c2_witness_validity(suite, request, tmp_path):
    failures = []
    unsafe = [(name, m, cname, v) for name, m, cname, _, v in suite["runs"] if v.unsafe]
    for name, m, cname, v in unsafe:
        text = emit_witness(m, v.trace)
        if not simulate(m, parse_witness(text)):
            failures.append((name, cname))
    aigsim = shutil.which("aigsim")
    external = "aigsim not installed, external check skipped"
    if aigsim:
        rng = random.Random(0)
        bad_ext = 0
        for name, m, cname, v in rng.sample(unsafe, min(20, len(unsafe))):
            mp, wp = tmp_path / f"{name}.aag", tmp_path / f"{name}.wit"
            mp.write_text(to_aag(m))
            wp.write_text(emit_witness(m, v.trace))
            res = subprocess.run([aigsim, "-c", str(mp), str(wp)], capture_output=True, text=True)
            bad_ext += res.returncode != 0
        failures += [("aigsim", bad_ext)] if bad_ext else []
        external = f"aigsim checked {min(20, len(unsafe))}"
    _say(request, 2, not failures, f"{len(unsafe)} witnesses, {len(failures)} failures; {external}")
    assert not failures


@pytest.mark.criterion(3, "cores of the three-clause worked example")
def test_c3_example_cores(request):
    solver = Solver(5)
    for c in ([1, -4, -5], [3, -4, -5], [2, 4]):
        solver.add_clause(c)
    r1 = solver.solve([-1, 2, 4, 5, -3])
    r2 = solver.solve([5, 4, -3, 2, -1])
    ok = (not r1.satisfiable and set(r1.core) == {-1, 4, 5}
          and not r2.satisfiable and set(r2.core) == {5, 4, -3})
    _say(request, 3, ok, f"UC1={r1.core} conflict {r1.conflict_literal}; UC2={r2.core} conflict {r2.conflict_literal}")
    assert ok
    assert (r1.conflict_literal, r2.conflict_literal) == (5, -3)


@pytest.mark.criterion(4, "SAT engine against exhaustive enumeration")
def test_c4_sat_oracle(request):
    rng = random.Random(4)
    t0 = time.perf_counter()
    mismatches = bad_cores = unsat = 0
    for _ in range(10_000):
        n, clauses, assum = random_cnf(rng, 20, 90)
        s = Solver(n)
        for c in clauses:
            s.add_clause(c)
        res = s.solve(assum)
        if res.satisfiable != brute_force_sat(n, clauses, assum):
            mismatches += 1
        if res.satisfiable:
            if not all(any(res.value(l) for l in c) for c in clauses) or not all(res.value(a) for a in assum):
                mismatches += 1
        else:
            unsat += 1
            if not set(res.core) <= set(assum) or brute_force_sat(n, clauses, res.core) or s.solve(list(res.core)):
                bad_cores += 1
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and bad_cores == 0 and dt < 60
    _say(request, 4, ok, f"10000 instances ({unsat} unsat), {mismatches} mismatches, {bad_cores} bad cores, {dt:.1f}s")
    assert mismatches == 0 and bad_cores == 0
    assert dt < 60


def _random_history(rng, n):
    ctx = ReorderContext(capacity=rng.randint(1, 8))
    vs = list(range(1, n + 1))
    for _ in range(rng.randint(0, 10)):
        k = rng.randint(0, n)
        core = tuple(v * rng.choice((1, -1)) for v in rng.sample(vs, k))
        ctx.on_unsat(1, core, rng.choice(core) if core else None, promote=rng.random() < 0.5)
    if rng.random() < 0.6:
        perm = [v * rng.choice((1, -1)) for v in vs]
        rng.shuffle(perm)
        ctx.on_failed_state(1, perm)
    return ctx


@pytest.mark.criterion(5, "reordering is a permutation; Local(1) without common vector equals Intersection")
def test_c5_reorder_permutation(request):
    rng = random.Random(5)
    configs = STATIC
    violations = 0
    for cfg in configs:
        for _ in range(10_000):
            n = rng.randint(0, 16)
            ctx = _random_history(rng, n)
            s = [v * rng.choice((1, -1)) for v in range(1, n + 1)]
            rng.shuffle(s)
            s = tuple(s)
            if Counter(reorder(ctx, s, 1, cfg)) != Counter(s):
                violations += 1
    cross = 0
    for _ in range(10_000):
        n = rng.randint(0, 16)
        ctx = _random_history(rng, n)
        ctx.level(1).common = ()
        s = tuple(v * rng.choice((1, -1)) for v in range(1, n + 1))
        if order_local(ctx, s, 1, 1) != order_intersection(ctx, s, 1):
            cross += 1
    ok = violations == 0 and cross == 0
    _say(request, 5, ok, f"{len(configs)}x10000 permutation checks, {violations} violations; {cross} Local(1)/Intersection differences")
    assert ok


class _FrameAudit:
    """on_block hook: enumerate every state containing the cube and all
    inputs; no successor may lie in the frame one level below."""

    def __init__(self, model):
        self.model = model
        self.bad = bad_set(model)
        self.states = list(all_states(model.num_latches))
        self.events = 0
        self.violations = []

    def on_block(self, engine, level, cube, state):
        m = self.model
        self.events += 1
        below = self.bad if level - 1 == 0 else frame_states(m, engine.frames.levels[level - 1].cubes)
        pos = {v: k for k, v in enumerate(m.latch_vars())}
        for s in self.states:
            if not all(s[pos[abs(l)]] == (l > 0) for l in cube):
                continue
            for inputs in product((False, True), repeat=m.num_inputs):
                t, _ = step(m, s, inputs)
                if t in below:
                    self.violations.append((level, cube, s, inputs))
                    return

    def on_restart(self, engine, event):
        pass

    def on_round(self, engine, index):
        pass


@pytest.mark.criterion(6, "frame soundness by enumeration (models with at most 5 latches)")
def test_c6_frame_soundness(suite, request):
    t0 = time.perf_counter()
    events = 0
    violations = []
    models = [(n, m) for n, m in suite["models"] if m.num_latches <= 5]
    for name, m in models:
        for cfg in STATIC + [HYBRID_10MS]:
            audit = _FrameAudit(m)
            _run(m, cfg, hooks=audit)
            events += audit.events
            violations += [(name,) + v for v in audit.violations]
    dt = time.perf_counter() - t0
    ok = not violations and dt < 300
    _say(request, 6, ok, f"{len(models)} models, {events} block events, {len(violations)} violations, {dt:.1f}s")
    assert not violations, violations[:3]
    assert dt < 300


@pytest.mark.criterion(7, "invariant check agrees with explicit set inclusion")
def test_c7_invariant_check(suite, request):
    checked = 0
    mismatches = []
    for name, m, cname, eng, v in suite["runs"]:
        if not v.safe or m.num_latches > 6 or v.level == 0:
            continue
        checked += 1
        expect = invariant_level(m, eng.frames.snapshot())
        if expect != v.level:
            mismatches.append((name, cname, v.level, expect))
    _say(request, 7, not mismatches, f"{checked} safe runs compared, {len(mismatches)} mismatches")
    assert checked > 100
    assert not mismatches, mismatches[:5]


class _TickClock:
    def __init__(self, dt):
        self.t = 0.0
        self.dt = dt

    def __call__(self):
        self.t += self.dt
        return self.t


def _audited_hybrid(model, clock=None, time_limit=0.001):
    kw = {"clock": clock} if clock else {}
    eng = CarEngine(model, OrderingConfig(Strategy.LOCAL, 1), **kw)
    problems = []
    original = eng.restart

    def restart():
        frames_before = eng.frames.snapshot()
        ilimit_before = eng.config.ilimit
        original()
        if len(eng.useq) != 1:
            problems.append("U not collapsed")
        if eng.config.ilimit != ilimit_before + 1:
            problems.append("ilimit step")
        if eng.frames.snapshot() != frames_before:
            problems.append("frames changed")

    eng.restart = restart
    v = eng.hybrid_check(HybridConfig(time_limit=time_limit, growth=2.0))
    return v, problems


@pytest.mark.criterion(8, "hybrid restart semantics under a 1 ms limit")
def test_c8_hybrid_restarts(suite, request):
    # models needing at least three rounds under the base configuration
    slow = []
    for name, m in suite["models"]:
        _, v = _run(m, OrderingConfig(Strategy.LOCAL, 1))
        if len(v.stats.rounds) >= 3:
            slow.append((name, m))
    problems, no_restart, wrong = [], [], []
    restarts = 0
    for name, m in slow:
        # deterministic clock: each reading advances 0.5 ms, so 1 ms expires every few obligations
        v, p = _audited_hybrid(m, clock=_TickClock(0.0005))
        restarts += v.stats.restarts
        problems += [(name, x) for x in p]
        if v.stats.restarts == 0:
            no_restart.append(name)
        expect = "safe" if suite["oracle"][name] is None else "unsafe"
        if v.status != expect:
            wrong.append(name)
    # and once on the wall clock
    wall, p = _audited_hybrid(counter(6, 50, wrap_at=40))
    problems += [("wall-clock", x) for x in p]
    ok = slow and not problems and not no_restart and not wrong and wall.safe and wall.stats.restarts > 0
    _say(request, 8, bool(ok), f"{len(slow)} models with >=3 rounds, {restarts} restarts, "
         f"{len(no_restart)} without restart, {len(wrong)} wrong verdicts, {len(problems)} semantic violations; "
         f"wall-clock run {wall.stats.restarts} restarts")
    assert slow and not problems and not no_restart and not wrong
    assert wall.safe and wall.stats.restarts > 0


@pytest.mark.criterion(9, "metrics plumbing")
def test_c9_metrics(suite, request):
    shim_mismatch = 0
    for name, m in suite["models"][:60]:
        eng = CarEngine(m)
        count = [0]
        orig = eng.solver.solve

        def shim(assumptions=(), _orig=orig, _count=count):
            _count[0] += 1
            return _orig(assumptions)

        eng.solver.solve = shim
        v = eng.check()
        if count[0] != v.stats.queries + v.stats.aux_queries:
            shim_mismatch += 1
    rng = random.Random(9)
    st = RunStats()
    times, ucs, proofs = [], [], []
    for _ in range(5000):
        t = rng.random()
        if rng.random() < 0.5:
            n = rng.randint(1, 500)
            st.record_query(False, t, n)
            times.append(t)
            ucs.append(n)
        else:
            st.record_query(True, t)
    for _ in range(300):
        c, t = rng.randint(1, 100), rng.random()
        st.record_proof(c, t)
        proofs.append((c, t))
    rep = summarize(st)
    errs = [
        abs(rep["avg_unsat_time"] - math.fsum(times) / len(times)),
        abs(rep["avg_uc_length"] - sum(ucs) / len(ucs)),
        abs(rep["avg_sat_calls_per_proof"] - sum(c for c, _ in proofs) / len(proofs)),
        abs(rep["avg_proof_time"] - math.fsum(t for _, t in proofs) / len(proofs)),
    ]
    st2 = RunStats()
    st2.record_round(1, 0.0, 1)
    st2.record_round(2, 0.0, 2)
    table = round_table(summarize(st2)).splitlines()
    cols_ok = table[0].split("\t") == ["Round", "TimeForThisRound(s)", "size(U)"] and table[1:] == ["1\t0.000\t1", "2\t0.000\t2"]
    ok = shim_mismatch == 0 and max(errs) <= 1e-9 and cols_ok
    _say(request, 9, ok, f"shim mismatches {shim_mismatch}/60, max mean error {max(errs):.2e}, round table columns {'ok' if cols_ok else 'wrong'}")
    assert ok


@pytest.mark.criterion(10, "Natural vs Combination locality report (informational)")
def test_c10_locality_report(request):
    rows = {}
    for cfg in (OrderingConfig(Strategy.NATURAL), OrderingConfig(Strategy.COMBINATION)):
        ucs, calls = [], []
        for name, m in hand_written().items():
            v = CarEngine(m, cfg).check()
            rep = summarize(v.stats)
            if rep["avg_uc_length"] is not None:
                ucs.append(rep["avg_uc_length"])
            if rep["avg_sat_calls_per_proof"] is not None:
                calls.append(rep["avg_sat_calls_per_proof"])
        rows[cfg.name] = (fmean(ucs), fmean(calls))
    lines = [
        f"avg UC length: natural {rows['natural'][0]:.2f} vs combination {rows['combination'][0]:.2f} (reference 241.1 vs 493.8)",
        f"avg SAT calls per proof: natural {rows['natural'][1]:.2f} vs combination {rows['combination'][1]:.2f} (reference 207.13 vs 173.57)",
    ]
    for line in lines:
        print(line)
    _say(request, 10, True, "; ".join(lines))
