"""
Engine configuration.

EngineConfig carries the work budgets and the parallelism settings consumed by
the engines, the degree kernel and the search strategies. It is immutable and
validated on construction. Thread counts are resolved lazily so that the
LATQD_THREADS environment variable is honoured at call time.
"""

import os
from dataclasses import dataclass
from typing import Optional

THREADS_ENV_VAR = "LATQD_THREADS"


@dataclass(frozen=True)
class EngineConfig:
    """
    Budgets and parallelism for a computation.

    Attributes:
        enumeration_budget: Maximum number of box points brute_force may visit
        op_budget: Maximum number of table updates for the residue programs
        search_budget: Maximum candidate count for exhaustive search
        threads: Worker threads for the n-loop, or None to resolve from the
            environment and then the machine's core count
        chunk_rows: Rows per n-loop chunk. Fixed independent of the thread
            count so that partial results do not depend on parallelism.
    """

    enumeration_budget: int = 10**8
    op_budget: int = 10**10
    search_budget: int = 10**7
    threads: Optional[int] = None
    chunk_rows: int = 4096

    def __post_init__(self):
        for name in ("enumeration_budget", "op_budget", "search_budget", "chunk_rows"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.threads is not None and self.threads < 1:
            raise ValueError(f"threads must be at least 1, got {self.threads}")

    def resolved_threads(self) -> int:
        """Thread count after applying the environment override and core count."""
        return resolve_threads(self.threads)


def resolve_threads(requested: Optional[int] = None) -> int:
    """
    Resolve the worker thread count.

    The LATQD_THREADS environment variable wins over the requested value; when
    neither is set, every available core is used.

    Args:
        requested: Thread count asked for by the caller, or None

    Returns:
        A positive thread count

    Raises:
        ValueError: If the environment variable is not a positive integer
    """
    from_env = os.environ.get(THREADS_ENV_VAR)
    if from_env is not None and from_env.strip():
        try:
            threads = int(from_env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {from_env!r}") from None
        if threads < 1:
            raise ValueError(f"{THREADS_ENV_VAR} must be at least 1, got {threads}")
        return threads
    if requested is not None:
        return requested
    return os.cpu_count() or 1


DEFAULT_CONFIG = EngineConfig()
