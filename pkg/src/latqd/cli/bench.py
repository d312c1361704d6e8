"""
Scaling harness behind `latqd bench`.

One parameter (N, s or d) walks a ladder while the other two stay fixed; each
row is the median wall time over a number of repeats after one untimed warm-up
run, together with the ratio to the previous row. Doubling N should roughly
double the time of both kernels; doubling s roughly quadruples charsum.
"""

import csv
import io
import json
import logging
import os
import platform
import statistics
import time
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy

from ..config import EngineConfig
from ..degree.degree import trig_degree_dp
from ..engines.fourier_engines import charsum
from ..lattice.rule import LatticeRule
from ..utilities import korobov_vector

logger = logging.getLogger(__name__)

SWEEPS = ("n", "s", "d")
BENCH_ENGINES = ("charsum", "dp-degree")

# Fixed parameters and ladders; each ladder roughly doubles its parameter.
DEFAULT_FIXED = {"n": 1009, "s": 3, "d": 4}
DEFAULT_LADDERS = {
    "n": (1009, 2003, 4001, 8009),
    "s": (2, 4, 8, 16),
    "d": (1, 2, 4, 8),
}

# Korobov parameter of the benchmarked rules.
BENCH_KOROBOV_A = 3


@dataclass(frozen=True)
class BenchRow:
    value: int
    N: int
    s: int
    d: int
    median_ns: int
    ratio: Optional[float]


def bench_rule(N: int, s: int) -> LatticeRule:
    """Korobov rule used for timing."""
    g = korobov_vector(BENCH_KOROBOV_A, N, s)
    if 0 in g:
        raise ValueError(f"benchmark rule for N={N}, s={s} has a zero component")
    return LatticeRule(N, g)


def _kernel(engine: str, config: Optional[EngineConfig]) -> Callable[[LatticeRule, int], Any]:
    if engine == "charsum":
        return lambda rule, d: charsum(rule, d, config)
    if engine == "dp-degree":
        return lambda rule, d: trig_degree_dp(rule, d, config)
    raise ValueError(f"engine must be one of {BENCH_ENGINES}, got {engine!r}")


def machine_info(config: Optional[EngineConfig] = None) -> Dict[str, Any]:
    """Where the numbers were measured."""
    return {
        "python": platform.python_version(),
        "implementation": platform.python_implementation(),
        "system": platform.system(),
        "machine": platform.machine(),
        "processor": platform.processor(),
        "cpu_count": os.cpu_count(),
        "numpy": numpy.__version__,
        "threads": config.resolved_threads() if config is not None else None,
    }


def run_sweep(
    sweep: str,
    engine: str,
    repeats: int = 5,
    values: Optional[Sequence[int]] = None,
    n: int = DEFAULT_FIXED["n"],
    s: int = DEFAULT_FIXED["s"],
    d: int = DEFAULT_FIXED["d"],
    config: Optional[EngineConfig] = None,
) -> List[BenchRow]:
    """
    Time one kernel along one parameter ladder.

    Args:
        sweep: "n", "s" or "d"
        engine: "charsum" or "dp-degree" (the degree DP with d_max = d)
        repeats: Timed runs per row; the median is reported
        values: Ladder for the swept parameter; None selects the default
        n, s, d: Fixed values of the parameters not swept
        config: Engine configuration

    Returns:
        One row per ladder value, in ladder order

    Raises:
        ValueError: On an unknown sweep or engine, repeats < 1 or an empty ladder
    """
    if sweep not in SWEEPS:
        raise ValueError(f"sweep must be one of {SWEEPS}, got {sweep!r}")
    if repeats < 1:
        raise ValueError(f"repeats must be at least 1, got {repeats}")
    kernel = _kernel(engine, config)
    ladder = tuple(values) if values is not None else DEFAULT_LADDERS[sweep]
    if not ladder:
        raise ValueError("ladder is empty")

    rows: List[BenchRow] = []
    for value in ladder:
        params = {"n": n, "s": s, "d": d, sweep: value}
        rule = bench_rule(params["n"], params["s"])
        kernel(rule, params["d"])
        samples = []
        for _ in range(repeats):
            start = time.perf_counter_ns()
            kernel(rule, params["d"])
            samples.append(time.perf_counter_ns() - start)
        median = int(statistics.median(samples))
        ratio = median / rows[-1].median_ns if rows and rows[-1].median_ns > 0 else None
        rows.append(BenchRow(value, params["n"], params["s"], params["d"], median, ratio))
        logger.info("bench %s %s=%d: median %d ns", engine, sweep, value, median)
    return rows


def render_rows(
    rows: Sequence[BenchRow],
    sweep: str,
    engine: str,
    output_format: str,
    machine: Dict[str, Any],
) -> str:
    """
    Emit the table as CSV (machine stanza as leading '#' lines) or JSON.
    """
    if output_format == "json":
        document = {
            "sweep": sweep,
            "engine": engine,
            "machine": machine,
            "rows": [asdict(row) for row in rows],
        }
        return json.dumps(document, separators=(",", ":")) + "\n"
    if output_format != "csv":
        raise ValueError(f"format must be csv or json, got {output_format!r}")

    buffer = io.StringIO()
    for key, value in machine.items():
        buffer.write(f"# {key}={value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["sweep", "engine", "value", "N", "s", "d", "median_ns", "ratio"])
    for row in rows:
        ratio = "" if row.ratio is None else repr(row.ratio)
        writer.writerow([sweep, engine, row.value, row.N, row.s, row.d, row.median_ns, ratio])
    return buffer.getvalue()
