"""Run instrumentation: query timings, core lengths, proofs and rounds.

A *proof* is one iteration of the state-picking loop: a state is taken
from the U-sequence and the obligation stack is worked until empty.
Proofs cut short by a restart or a counterexample are tagged and left out
of the proof averages.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from statistics import fmean
from typing import Any, Dict, List, Optional, Sequence

SCHEMA_VERSION = 1


@dataclass
class ProofRecord:
    sat_calls: int
    time: float
    status: str = "done"  # "done", "restart", "timeout" or "cex"


@dataclass
class RoundRecord:
    round: int
    time: float
    u_size: int


@dataclass
class RunStats:
    sat_count: int = 0
    unsat_count: int = 0
    sat_times: List[float] = field(default_factory=list)
    unsat_times: List[float] = field(default_factory=list)
    uc_lengths: List[int] = field(default_factory=list)
    proofs: List[ProofRecord] = field(default_factory=list)
    rounds: List[RoundRecord] = field(default_factory=list)
    restarts: int = 0
    restart_events: List[Dict[str, Any]] = field(default_factory=list)
    aux_queries: int = 0  # reset-state check, not part of the CAR loop
    invariant_checks: int = 0
    verdict: Optional[str] = None
    total_time: float = 0.0

    @property
    def queries(self) -> int:
        return self.sat_count + self.unsat_count

    def record_query(self, satisfiable: bool, wall_time: float, uc_length: Optional[int] = None) -> None:
        if satisfiable:
            self.sat_count += 1
            self.sat_times.append(wall_time)
        else:
            if uc_length is None:
                raise ValueError("an UNSAT query needs its core length")
            self.unsat_count += 1
            self.unsat_times.append(wall_time)
            self.uc_lengths.append(uc_length)

    def record_proof(self, sat_calls: int, wall_time: float, status: str = "done") -> None:
        self.proofs.append(ProofRecord(sat_calls, wall_time, status))

    def record_round(self, index: int, wall_time: float, u_size: int) -> None:
        self.rounds.append(RoundRecord(index, wall_time, u_size))


def _mean(xs: Sequence[float]) -> Optional[float]:
    return fmean(xs) if xs else None


def summarize(stats: RunStats, *, model: str = "", strategy: str = "") -> Dict[str, Any]:
    done = [p for p in stats.proofs if p.status == "done"]
    return {
        "model": model,
        "strategy": strategy,
        "verdict": stats.verdict,
        "queries": stats.queries,
        "sat_queries": stats.sat_count,
        "unsat_queries": stats.unsat_count,
        "avg_unsat_time": _mean(stats.unsat_times),
        "avg_sat_time": _mean(stats.sat_times),
        "avg_sat_calls_per_proof": _mean([p.sat_calls for p in done]),
        "avg_proof_time": _mean([p.time for p in done]),
        "proofs": len(done),
        "interrupted_proofs": len(stats.proofs) - len(done),
        "avg_uc_length": _mean(stats.uc_lengths),
        "restarts": stats.restarts,
        "total_time": stats.total_time,
        "rounds": [
            {"round": r.round, "time": r.time, "u_size": r.u_size} for r in stats.rounds
        ],
    }


CSV_FIELDS = [
    "model", "strategy", "verdict", "queries", "sat_queries", "unsat_queries",
    "avg_unsat_time", "avg_sat_time", "avg_sat_calls_per_proof", "avg_proof_time",
    "proofs", "interrupted_proofs", "avg_uc_length", "restarts", "total_time",
]


def _header() -> Dict[str, Any]:
    info = time.get_clock_info("perf_counter")
    return {
        "schema_version": SCHEMA_VERSION,
        "clock": "perf_counter",
        "clock_monotonic": info.monotonic,
        "clock_resolution": info.resolution,
    }


def to_json(reports: Sequence[Dict[str, Any]]) -> str:
    return json.dumps({**_header(), "reports": list(reports)}, indent=2, sort_keys=True)


def to_csv(reports: Sequence[Dict[str, Any]]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow({k: ("" if r.get(k) is None else repr(r[k]) if isinstance(r[k], float) else r[k])
                    for k in CSV_FIELDS})
    return buf.getvalue()


def round_table(report: Dict[str, Any]) -> str:
    """Per-round table with columns Round / TimeForThisRound(s) / size(U)."""
    lines = ["Round\tTimeForThisRound(s)\tsize(U)"]
    lines += [f"{r['round']}\t{r['time']:.3f}\t{r['u_size']}" for r in report["rounds"]]
    return "\n".join(lines)


def write_reports(path: str, reports: Sequence[Dict[str, Any]]) -> None:
    text = to_csv(reports) if str(path).endswith(".csv") else to_json(reports)
    with open(path, "w") as fh:
        fh.write(text)
