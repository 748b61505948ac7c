"""``carmc`` command line: check one AIGER model and report the verdict.

Prints ``0`` (safe), ``1`` (unsafe) or ``2`` (unknown) on the first line of
stdout.  Exit status is 20 / 10 / 0 respectively, and 64 or above for usage
and input errors.
"""

from __future__ import annotations

import argparse
import logging
import multiprocessing as mp
import re
import sys
from typing import List, Optional, Sequence

from .aiger import AigerError, read_aiger
from .cnf import encode
from .engine import CarEngine, HybridConfig, Verdict
from .metrics import summarize, write_reports
from .reorder import OrderingConfig, Strategy
from .witness import emit_witness, parse_witness, simulate

EXIT_SAFE, EXIT_UNSAFE, EXIT_UNKNOWN = 20, 10, 0
EXIT_USAGE, EXIT_DATA, EXIT_NOINPUT, EXIT_SOFTWARE = 64, 65, 66, 70

_UNITS = {"ms": 1e-3, "s": 1.0, "m": 60.0, "h": 3600.0, "": 1.0}
_SIZES = {"": 1, "k": 1 << 10, "m": 1 << 20, "g": 1 << 30}

log = logging.getLogger("carmc")


def parse_duration(text: str) -> float:
    """``"1.5"``, ``"10ms"``, ``"2s"``, ``"3m"``, ``"1h"`` to seconds."""
    m = re.fullmatch(r"\s*([0-9]*\.?[0-9]+(?:e-?[0-9]+)?)\s*(ms|s|m|h|)\s*", text.lower())
    if not m:
        raise argparse.ArgumentTypeError(f"invalid duration {text!r}")
    value = float(m.group(1)) * _UNITS[m.group(2)]
    if value <= 0:
        raise argparse.ArgumentTypeError("duration must be positive")
    return value


def parse_size(text: str) -> int:
    m = re.fullmatch(r"\s*([0-9]+)\s*([kmg]?)b?\s*", text.lower())
    if not m or int(m.group(1)) == 0:
        raise argparse.ArgumentTypeError(f"invalid memory size {text!r}")
    return int(m.group(1)) * _SIZES[m.group(2)]


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _growth(text: str) -> float:
    try:
        f = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if f < 1:
        raise argparse.ArgumentTypeError("growth factor must be >= 1")
    return f


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="carmc", description="Backward CAR safety checker for AIGER circuits.")
    p.add_argument("model", help="AIGER file (.aag or .aig)")
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default="combination")
    p.add_argument("--ilimit", type=_positive_int, default=None,
                   help="number of recent cores used by the local strategy (default 1)")
    p.add_argument("--promote-conflict", choices=["on", "off"], default="on")
    p.add_argument("--hybrid", action="store_true", help="switch configurations on a timer")
    p.add_argument("--time-limit", type=parse_duration, default=1.0,
                   help="per-configuration limit in hybrid mode (default 1s)")
    p.add_argument("--growth", type=_growth, default=2.0, help="time limit factor per restart")
    p.add_argument("--timeout", type=parse_duration, default=None, help="overall budget")
    p.add_argument("--memory", type=parse_size, default=None, help="address-space cap, e.g. 8g")
    p.add_argument("--witness", metavar="PATH", help="write the counterexample here ('-' for stdout)")
    p.add_argument("--metrics", metavar="PATH", help="write a JSON (or .csv) report")
    p.add_argument("--verify", action="store_true", help="replay the witness before reporting")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--portfolio", action="store_true",
                   help="race natural, intersection, rotation, combination and local(2) in parallel")
    p.add_argument("--dimacs", metavar="PATH", help="dump the transition CNF and exit")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def ordering_from_args(args) -> OrderingConfig:
    strategy = Strategy(args.strategy)
    ilimit = args.ilimit if args.ilimit is not None else 1
    return OrderingConfig(strategy, ilimit, args.promote_conflict == "on")


def _run_one(model, cfg: OrderingConfig, args) -> Verdict:
    engine = CarEngine(model, cfg, seed=args.seed)
    if args.hybrid:
        hcfg = HybridConfig(base=cfg, time_limit=args.time_limit, growth=args.growth, budget=args.timeout)
        return engine.hybrid_check(hcfg)
    return engine.check(args.timeout)


def _portfolio_worker(model, cfg, args, queue) -> None:
    try:
        v = _run_one(model, cfg, args)
        queue.put((cfg.name, v))
    except BaseException as exc:  # report and let the others continue
        queue.put((cfg.name, Verdict("unknown", reason=f"error: {exc}")))


PORTFOLIO = (
    OrderingConfig(Strategy.NATURAL),
    OrderingConfig(Strategy.INTERSECTION),
    OrderingConfig(Strategy.ROTATION),
    OrderingConfig(Strategy.COMBINATION),
    OrderingConfig(Strategy.LOCAL, 2),
)


def run_portfolio(model, args, configs: Sequence[OrderingConfig] = PORTFOLIO):
    """Race independent engines; the first safe/unsafe answer wins."""
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    queue = ctx.Queue()
    procs = [ctx.Process(target=_portfolio_worker, args=(model, c, args, queue), daemon=True) for c in configs]
    for pr in procs:
        pr.start()
    best = None
    try:
        for _ in procs:
            name, v = queue.get()
            if v.status != "unknown":
                best = (name, v)
                break
            best = best or (name, v)
    finally:
        for pr in procs:
            if pr.is_alive():
                pr.terminate()
        for pr in procs:
            pr.join()
    return best


def _limit_memory(nbytes: int) -> None:
    try:
        import resource
        resource.setrlimit(resource.RLIMIT_AS, (nbytes, nbytes))
    except (ImportError, ValueError, OSError) as exc:
        log.warning("memory cap not applied: %s", exc)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        model = read_aiger(args.model)
    except OSError as exc:
        print(f"carmc: cannot read {args.model}: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except AigerError as exc:
        print(f"carmc: {args.model}: {exc}", file=sys.stderr)
        return EXIT_DATA

    if args.dimacs:
        _write(args.dimacs, encode(model).to_dimacs(include_bad_cone=True))
        return EXIT_UNKNOWN

    if args.memory:
        _limit_memory(args.memory)

    cfg = ordering_from_args(args)
    if args.portfolio:
        name, verdict = run_portfolio(model, args)
    else:
        name, verdict = cfg.name, _run_one(model, cfg, args)
    log.info("verdict=%s strategy=%s reason=%s", verdict.status, name, verdict.reason or "-")

    code = {"safe": 0, "unsafe": 1}.get(verdict.status, 2)
    print(code)
    if verdict.unsafe:
        text = emit_witness(model, verdict.trace)
        if args.verify and not simulate(model, parse_witness(text)):
            print("carmc: internal error: witness does not reach a bad state", file=sys.stderr)
            return EXIT_SOFTWARE
        if args.witness:
            _write(args.witness, text)
    if args.metrics:
        write_reports(args.metrics, [summarize(verdict.stats, model=args.model, strategy=name)])
    return {0: EXIT_SAFE, 1: EXIT_UNSAFE}.get(code, EXIT_UNKNOWN)


if __name__ == "__main__":
    sys.exit(main())
