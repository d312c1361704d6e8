"""
Deterministic partitioning and summation of the node loop.

The Fourier engines compute one contribution row per quadrature node n. Rows
are produced in chunks of a fixed size, possibly on several threads. Each
chunk is collapsed to a single partial row by a pairwise tree as soon as it is
filled, and the partials are combined by a second pairwise tree. Chunk
boundaries and tree shapes never depend on the thread count, so results are
bit-identical for any degree of parallelism, and at most one chunk of rows per
worker is alive at a time.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Tuple

import numpy

logger = logging.getLogger(__name__)

ChunkFiller = Callable[[int, int], numpy.ndarray]


def chunk_bounds(total: int, chunk_rows: int) -> List[Tuple[int, int]]:
    """
    Split range(total) into consecutive [start, stop) chunks.

    Args:
        total: Number of rows
        chunk_rows: Maximum rows per chunk

    Returns:
        Chunk boundaries in ascending order
    """
    if chunk_rows < 1:
        raise ValueError(f"chunk_rows must be positive, got {chunk_rows}")
    return [(start, min(start + chunk_rows, total)) for start in range(0, total, chunk_rows)]


def sum_chunks(total: int, chunk_rows: int, threads: int, fill: ChunkFiller) -> numpy.ndarray:
    """
    Sum all rows, chunk by chunk.

    Args:
        total: Number of rows (nodes), at least 1
        chunk_rows: Rows per chunk
        threads: Worker threads; 1 runs inline
        fill: Function (start, stop) -> array whose first axis has stop - start rows

    Returns:
        pairwise_sum over the chunks' pairwise_sum partials, shaped like one row
    """
    bounds = chunk_bounds(total, chunk_rows)
    if not bounds:
        raise ValueError("sum_chunks needs at least one row")

    def partial(bound: Tuple[int, int]) -> numpy.ndarray:
        return pairwise_sum(fill(*bound))

    if threads <= 1 or len(bounds) == 1:
        partials = [partial(bound) for bound in bounds]
    else:
        workers = min(threads, len(bounds))
        logger.debug("splitting %d rows into %d chunks on %d threads", total, len(bounds), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(partial, bounds))
    return pairwise_sum(numpy.stack(partials))


def pairwise_sum(rows: numpy.ndarray) -> numpy.ndarray:
    """
    Sum along the first axis with a fixed binary tree.

    Rows are zero-padded to a power of two and adjacent pairs are added level
    by level. Adding an exact zero leaves a value unchanged, so the padding
    does not perturb the result; round-off grows like log2 of the row count.

    Args:
        rows: Array of shape (n, ...), n >= 1

    Returns:
        Array of shape rows.shape[1:]
    """
    if rows.shape[0] == 0:
        raise ValueError("pairwise_sum needs at least one row")
    level = rows
    width = 1 << (level.shape[0] - 1).bit_length()
    if width != level.shape[0]:
        pad = numpy.zeros((width - level.shape[0],) + level.shape[1:], dtype=level.dtype)
        level = numpy.concatenate([level, pad], axis=0)
    while level.shape[0] > 1:
        level = level[0::2] + level[1::2]
    return level[0]
