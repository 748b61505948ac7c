"""CAR (complementary approximate reachability) safety checking for AIGER
circuits, with assumption-ordering strategies for the underlying SAT queries."""

from .aiger import AigerError, AigModel, parse_aiger, read_aiger, to_aag
from .engine import CarEngine, HybridConfig, Hooks, TraceStep, Verdict, check, hybrid_check
from .frames import OFrames, USequence, invariant_check
from .metrics import RunStats, summarize
from .reorder import OrderingConfig, ReorderContext, Strategy, reorder
from .sat import SolveResult, Solver
from .witness import WitnessTrace, emit_witness, parse_witness, simulate

__version__ = "0.1.0"

__all__ = [
    "AigerError", "AigModel", "parse_aiger", "read_aiger", "to_aag",
    "CarEngine", "HybridConfig", "Hooks", "TraceStep", "Verdict", "check", "hybrid_check",
    "OFrames", "USequence", "invariant_check",
    "RunStats", "summarize",
    "OrderingConfig", "ReorderContext", "Strategy", "reorder",
    "SolveResult", "Solver",
    "WitnessTrace", "emit_witness", "parse_witness", "simulate",
]
