"""
Exact integer engines.

BruteForceEngine walks the whole box and is the oracle every other engine is
checked against. ResidueDPEngine carries the coordinate-by-coordinate
convolution of norm generating polynomials over Z_N directly, which is the
character sum computation before the Fourier diagonalization; it is exact and
agrees with the oracle on its entire domain.
"""

import itertools
import logging
from typing import Optional, Tuple, Union

import numpy

from ..config import EngineConfig
from ..lattice.enumerator import WeightEnumerator
from ..lattice.errors import BudgetExceeded
from ..lattice.rule import BoxRadius, LatticeRule
from ..utilities import box_size
from .abstract_engines import AbstractEnumeratorEngine

logger = logging.getLogger(__name__)

# Largest block of trailing coordinates enumerated as one numpy array.
_INNER_BLOCK_POINTS = 1 << 20


class BruteForceEngine(AbstractEnumeratorEngine):
    """
    Direct enumeration of {-d..d}^s.

    Trailing coordinates are expanded into flat residue and norm arrays once;
    leading coordinates are walked in Python, each combination shifting the
    flat arrays. Every box point is visited exactly once.
    """

    name = "brute"

    def enumerate_coefficients(self, rule: LatticeRule, d: BoxRadius) -> WeightEnumerator:
        points = box_size(d.d, rule.s)
        if points > self.config.enumeration_budget:
            raise BudgetExceeded(
                f"brute force needs {points} box points, budget is "
                f"{self.config.enumeration_budget}"
            )

        width = 2 * d.d + 1
        inner_dims = 0
        while inner_dims < rule.s and width ** (inner_dims + 1) <= _INNER_BLOCK_POINTS:
            inner_dims += 1
        inner_dims = max(inner_dims, 1)
        outer_g = rule.g[: rule.s - inner_dims]
        inner_res, inner_norm = _expand_block(rule.g[rule.s - inner_dims :], d.d, rule.N)

        max_norm = d.d * rule.s
        counts = numpy.zeros(max_norm + 1, dtype=numpy.int64)
        k_range = range(-d.d, d.d + 1)
        for outer_k in itertools.product(k_range, repeat=len(outer_g)):
            outer_res = sum(k_j * g_j for k_j, g_j in zip(outer_k, outer_g)) % rule.N
            outer_norm = sum(abs(k_j) for k_j in outer_k)
            hits = (inner_res + outer_res) % rule.N == 0
            counts += numpy.bincount(inner_norm[hits] + outer_norm, minlength=max_norm + 1)
        return WeightEnumerator(rule, d, counts.tolist())


def _expand_block(g: Tuple[int, ...], d: int, N: int) -> Tuple[numpy.ndarray, numpy.ndarray]:
    """Flat residues k . g mod N and norms |k|_1 for every k in {-d..d}^len(g)."""
    k = numpy.arange(-d, d + 1, dtype=numpy.int64)
    residues = numpy.zeros(1, dtype=numpy.int64)
    norms = numpy.zeros(1, dtype=numpy.int64)
    for g_j in g:
        residues = ((residues[:, None] + k[None, :] * g_j) % N).ravel()
        norms = (norms[:, None] + numpy.abs(k)[None, :]).ravel()
    return residues, norms


class ResidueDPEngine(AbstractEnumeratorEngine):
    """
    Exact convolution over residues.

    Maintains T[r, a], the number of partial vectors (k_1..k_j) with
    sum k_i g_i = r (mod N) and l1 norm a, and extends it one coordinate at a
    time. The answer is row r = 0. Cost is N * (2d + 1) * (ds + 1) * s
    table updates.
    """

    name = "dp"

    def enumerate_coefficients(self, rule: LatticeRule, d: BoxRadius) -> WeightEnumerator:
        max_norm = d.d * rule.s
        ops = rule.N * (2 * d.d + 1) * (max_norm + 1) * rule.s
        if ops > self.config.op_budget:
            raise BudgetExceeded(
                f"residue DP needs {ops} table updates, budget is {self.config.op_budget}"
            )

        table = numpy.zeros((rule.N, max_norm + 1), dtype=numpy.int64)
        table[0, 0] = 1
        for g_j in rule.g:
            extended = numpy.zeros_like(table)
            for k in range(-d.d, d.d + 1):
                # Row r moves to row r + k g_j; column a moves to a + |k|.
                shifted = numpy.roll(table, (k * g_j) % rule.N, axis=0)
                extended[:, abs(k) :] += shifted[:, : max_norm + 1 - abs(k)]
            table = extended
        return WeightEnumerator(rule, d, table[0].tolist())


def brute_force(
    rule: LatticeRule, d: Union[int, BoxRadius], config: Optional[EngineConfig] = None
) -> WeightEnumerator:
    """
    Count dual vectors in the box by direct enumeration.

    Raises:
        BudgetExceeded: If (2d + 1)^s exceeds the enumeration budget
    """
    return BruteForceEngine(config).apply_engine(rule, d)


def residue_dp(
    rule: LatticeRule, d: Union[int, BoxRadius], config: Optional[EngineConfig] = None
) -> WeightEnumerator:
    """
    Exact enumerator by dynamic programming over residues.

    Raises:
        BudgetExceeded: If N * (2d + 1) * (ds + 1) * s exceeds the op budget
    """
    return ResidueDPEngine(config).apply_engine(rule, d)
