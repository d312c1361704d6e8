"""
Command line front end.

    latqd enumerate --n 5 --g 1,2 --d 2 --engine fft
    latqd degree --n 13 --g 1,5
    latqd search --n 13 --s 2 --strategy korobov
    latqd verify --cases 200 --seed 7
    latqd bench --sweep n --engine charsum

stdout carries exactly one result (a JSON document, a CSV table or the verify
report); diagnostics go to stderr. Exit codes:

    0  success
    1  verify found a mismatch, or a search found no valid candidate
    2  argument or validation error
    3  ResidualTooLarge
    4  BudgetExceeded
    5  InvariantViolation
"""

import argparse
import json
import logging
import sys
import time
from typing import Any, Callable, Optional, Sequence, Tuple

from ..config import EngineConfig
from ..degree.degree import trig_degree_dp
from ..engines.abstract_engines import available_engines, get_engine
from ..engines.exact_engines import residue_dp
from ..lattice.enumerator import trig_degree_from_coeffs
from ..lattice.errors import (
    BudgetExceeded,
    InvariantViolation,
    LatticeError,
    ModulusTooSmall,
    NoValidCandidate,
    ResidualTooLarge,
)
from ..lattice.rule import LatticeRule
from ..search.abstract_search import STRATEGIES, SearchSpec
from ..search.search_strategies import search
from ..utilities import korobov_vector
from .bench import BENCH_ENGINES, DEFAULT_FIXED, SWEEPS, machine_info, render_rows, run_sweep
from .documents import FORMATS, ResultDocument, Timing
from .verify import run_verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESIDUAL = 3
EXIT_BUDGET = 4
EXIT_INVARIANT = 5

# Most specific first; every LatticeError not listed is a validation error.
_EXIT_CODES: Tuple[Tuple[type, int], ...] = (
    (ResidualTooLarge, EXIT_RESIDUAL),
    (BudgetExceeded, EXIT_BUDGET),
    (InvariantViolation, EXIT_INVARIANT),
    (NoValidCandidate, EXIT_FAILED),
)


def exit_code_for(error: ValueError) -> int:
    """Exit code of an error raised while running a command."""
    for error_class, code in _EXIT_CODES:
        if isinstance(error, error_class):
            return code
    return EXIT_USAGE


# ─── Argument parsing ─────────────────────────────────────────────────────────


def int_list(text: str) -> Tuple[int, ...]:
    """Parse a comma separated integer list such as "1,5"."""
    try:
        values = tuple(int(item) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma separated integer list without spaces, got {text!r}"
        ) from None
    return values


def _add_rule_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="Modulus N")
    generator = parser.add_mutually_exclusive_group(required=True)
    generator.add_argument("--g", type=int_list, help="Generating vector, e.g. 1,5")
    generator.add_argument(
        "--korobov-a", type=int, help="Korobov parameter a; g = (1, a, ..., a^(s-1)) mod N"
    )
    parser.add_argument("--s", type=int, help="Dimension, required with --korobov-a")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads for the node loop (default: all cores; LATQD_THREADS overrides)",
    )
    common.add_argument("--out", default=None, help="Write the result to this file")
    common.add_argument(
        "--no-timing",
        action="store_true",
        help="Omit the timing block so repeated runs produce identical bytes",
    )
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging to stderr")

    parser = argparse.ArgumentParser(
        prog="latqd",
        description="Weight enumerators and trigonometric degree of rank-1 lattice rules.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    enumerate_parser = commands.add_parser(
        "enumerate", parents=[common], help="Weight enumerator coefficients"
    )
    _add_rule_arguments(enumerate_parser)
    enumerate_parser.add_argument("--d", type=int, required=True, help="Box radius")
    enumerate_parser.add_argument("--engine", choices=available_engines(), required=True)
    enumerate_parser.add_argument(
        "--tol", type=float, default=None, help="Rounding tolerance for charsum and fft"
    )
    enumerate_parser.add_argument("--format", choices=FORMATS, default="json")

    degree_parser = commands.add_parser("degree", parents=[common], help="Trigonometric degree")
    _add_rule_arguments(degree_parser)
    degree_parser.add_argument("--dmax", type=int, default=None, help="Box radius (default: N)")
    degree_parser.add_argument("--method", choices=("dp", "enumerator"), default="dp")
    degree_parser.add_argument("--format", choices=FORMATS, default="json")

    search_parser = commands.add_parser(
        "search", parents=[common], help="Search for a good generating vector"
    )
    search_parser.add_argument("--n", type=int, required=True, help="Modulus N")
    search_parser.add_argument("--s", type=int, required=True, help="Dimension")
    search_parser.add_argument("--strategy", choices=STRATEGIES, required=True)
    search_parser.add_argument("--trials", type=int, default=None, help="Random draws")
    search_parser.add_argument("--seed", type=int, default=None, help="Random seed")
    search_parser.add_argument(
        "--prune-symmetry", action="store_true", help="Exhaustive: one candidate per orbit"
    )
    search_parser.add_argument(
        "--dedup", action="store_true", help="Random: repeated draws do not count"
    )
    search_parser.add_argument("--keep", type=int, default=5, help="Runner-ups to report")
    search_parser.add_argument("--format", choices=FORMATS, default="json")

    verify_parser = commands.add_parser(
        "verify", parents=[common], help="Run the seeded property suite"
    )
    verify_parser.add_argument("--cases", type=int, default=200)
    verify_parser.add_argument("--seed", type=int, default=0)
    verify_parser.add_argument("--max-n", type=int, default=50)
    verify_parser.add_argument("--max-s", type=int, default=3)
    verify_parser.add_argument("--max-d", type=int, default=4)
    verify_parser.add_argument("--format", choices=("text", "json"), default="text")
    verify_parser.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    bench_parser = commands.add_parser("bench", parents=[common], help="Scaling measurements")
    bench_parser.add_argument("--sweep", choices=SWEEPS, required=True)
    bench_parser.add_argument("--engine", choices=BENCH_ENGINES, required=True)
    bench_parser.add_argument("--repeats", type=int, default=5)
    bench_parser.add_argument("--values", type=int_list, default=None, help="Ladder override")
    bench_parser.add_argument("--n", type=int, default=DEFAULT_FIXED["n"])
    bench_parser.add_argument("--s", type=int, default=DEFAULT_FIXED["s"])
    bench_parser.add_argument("--d", type=int, default=DEFAULT_FIXED["d"])
    bench_parser.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def rule_from_args(args: argparse.Namespace) -> LatticeRule:
    """
    Build the rule named by --n with --g or --korobov-a/--s.

    Raises:
        LatticeError: If the rule is invalid
        ValueError: If --korobov-a is given without --s, or --s disagrees with --g
    """
    if args.korobov_a is not None:
        if args.s is None:
            raise ValueError("--korobov-a needs --s")
        if args.n < 2:
            raise ModulusTooSmall(f"N must be at least 2, got {args.n}")
        return LatticeRule(args.n, korobov_vector(args.korobov_a, args.n, args.s))
    if args.s is not None and args.s != len(args.g):
        raise ValueError(f"--s {args.s} disagrees with --g of length {len(args.g)}")
    return LatticeRule(args.n, args.g)


def config_from_args(args: argparse.Namespace) -> EngineConfig:
    return EngineConfig(threads=args.threads)


def _timed(
    engine: str, no_timing: bool, compute: Callable[[], Any]
) -> Tuple[Any, Optional[Timing]]:
    start = time.perf_counter_ns()
    result = compute()
    elapsed = time.perf_counter_ns() - start
    return result, None if no_timing else Timing(wall_ns=elapsed, engine=engine)


# ─── Commands ─────────────────────────────────────────────────────────────────


def cmd_enumerate(args: argparse.Namespace) -> ResultDocument:
    """Weight enumerator of one rule with the chosen engine."""
    rule = rule_from_args(args)
    engine = get_engine(args.engine, config_from_args(args))
    W, timing = _timed(
        args.engine, args.no_timing, lambda: engine.apply_engine(rule, args.d, args.tol)
    )
    return ResultDocument(
        command="enumerate",
        rule=rule,
        engine=args.engine,
        d=W.d.d,
        coefficients=W.coeffs,
        residual=W.residual,
        timing=timing,
    )


def cmd_degree(args: argparse.Namespace) -> ResultDocument:
    """
    Trigonometric degree of one rule.

    The dp method runs the residue relaxation with d_max = --dmax (default N)
    and reports a witness when exact. The enumerator method reads the degree
    off the exact enumerator for d = --dmax (default N).
    """
    rule = rule_from_args(args)
    config = config_from_args(args)
    d_max = args.dmax if args.dmax is not None else rule.N
    if args.method == "dp":
        degree, timing = _timed(
            "dp", args.no_timing, lambda: trig_degree_dp(rule, d_max, config)
        )
    else:
        degree, timing = _timed(
            "enumerator",
            args.no_timing,
            lambda: trig_degree_from_coeffs(residue_dp(rule, d_max, config)),
        )
    return ResultDocument(
        command="degree", rule=rule, engine=args.method, d=d_max, degree=degree, timing=timing
    )


def cmd_search(args: argparse.Namespace) -> ResultDocument:
    """Best rule for (N, s) under the chosen strategy."""
    spec = SearchSpec(
        N=args.n,
        s=args.s,
        strategy=args.strategy,
        trials=args.trials,
        seed=args.seed,
        prune_symmetry=args.prune_symmetry,
        dedup=args.dedup,
        keep=args.keep,
    )
    result, timing = _timed(
        args.strategy, args.no_timing, lambda: search(spec, config_from_args(args))
    )
    return ResultDocument(
        command="search",
        rule=result.best_rule,
        engine=args.strategy,
        degree=result.rho,
        search=result,
        timing=timing,
    )


def cmd_verify(args: argparse.Namespace) -> Tuple[str, int]:
    """Run the property suite; returns the rendered report and the exit code."""
    report = run_verify(
        cases=args.cases,
        seed=args.seed,
        max_n=args.max_n,
        max_s=args.max_s,
        max_d=args.max_d,
        config=config_from_args(args),
        inject_fault=args.inject_fault,
    )
    if args.format == "json":
        text = json.dumps(report.serialize(), separators=(",", ":")) + "\n"
    else:
        text = report.render_text()
    return text, EXIT_OK if report.passed else EXIT_FAILED


def cmd_bench(args: argparse.Namespace) -> str:
    """Run one scaling sweep and render the table."""
    config = config_from_args(args)
    rows = run_sweep(
        args.sweep,
        args.engine,
        repeats=args.repeats,
        values=args.values,
        n=args.n,
        s=args.s,
        d=args.d,
        config=config,
    )
    return render_rows(rows, args.sweep, args.engine, args.format, machine_info(config))


def _run(args: argparse.Namespace) -> Tuple[str, int]:
    if args.command == "enumerate":
        return cmd_enumerate(args).render(args.format), EXIT_OK
    if args.command == "degree":
        return cmd_degree(args).render(args.format), EXIT_OK
    if args.command == "search":
        return cmd_search(args).render(args.format), EXIT_OK
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_bench(args), EXIT_OK


def emit(text: str, out: Optional[str]) -> None:
    """Write the result to --out when given, else to stdout."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    logger.debug("running %s", args.command)
    try:
        text, code = _run(args)
    except ValueError as error:
        code = exit_code_for(error)
        kind = type(error).__name__ if isinstance(error, LatticeError) else "error"
        print(f"latqd: {kind}: {error}", file=sys.stderr)
        return code

    emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
