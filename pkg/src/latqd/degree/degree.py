"""
Trigonometric degree by shortest dual vector search.

A rule integrates every trigonometric monomial of l1 frequency norm <= rho
exactly iff no nonzero k with |k|_1 <= rho satisfies k . g = 0 (mod N). So
rho + 1 is the smallest l1 norm of a nonzero dual vector. trig_degree_dp finds
that norm with a relaxation over residues, one coordinate at a time:

    new[(r + k g_j) mod N] = min over k in {-d_max..d_max} of old[r] + |k|

using O(N (2 d_max + 1) s) updates and no enumerator coefficients. The state
only tracks vectors with at least one nonzero component; the zero prefix is
handled as a separate source, so the all-zero vector can never be mistaken
for a dual vector. Predecessor links recover a witness, and the number of
shortest paths into each residue is carried along, which counts the shortest
dual vectors without a second pass.
"""

import logging
from typing import Iterator, List, Optional, Tuple, Union

import numpy

from ..config import DEFAULT_CONFIG, EngineConfig
from ..lattice.errors import BudgetExceeded
from ..lattice.rule import BoxRadius, DualVector, LatticeRule, TrigDegree, is_dual

logger = logging.getLogger(__name__)

# Distance of a residue no nonzero partial vector reaches.
UNREACHED = numpy.iinfo(numpy.int64).max // 4

# Upper bound on (k values) x (residues) held at once during a relaxation.
_BLOCK_ELEMENTS = 1 << 22

# Path counts saturate at _COUNT_LIMIT // (2 d_max + 3), so one block sum plus
# the running count stays inside int64.
_COUNT_LIMIT = 1 << 62


class DegreeDPState:
    """
    Final state of the residue relaxation.

    dist[r] is the smallest l1 norm of a nonzero vector in the box with
    k . g = r (mod N), or UNREACHED. counts[r] is the number of such vectors
    of norm dist[r], saturated at count_cap. choices[j, r] and from_zero[j, r]
    are the predecessor links: the k_j used by the best path reaching residue
    r after coordinate j, and whether coordinates before j were all zero.
    """

    def __init__(
        self,
        rule: LatticeRule,
        d_max: BoxRadius,
        dist: numpy.ndarray,
        counts: numpy.ndarray,
        count_cap: int,
        choices: numpy.ndarray,
        from_zero: numpy.ndarray,
    ):
        self.rule = rule
        self.d_max = d_max
        self.dist = dist
        self.counts = counts
        self.count_cap = count_cap
        self.choices = choices
        self.from_zero = from_zero

    @property
    def shortest_norm(self) -> Optional[int]:
        """Smallest nonzero dual norm inside the box, or None if none reached."""
        value = int(self.dist[0])
        return None if value >= UNREACHED else value

    @property
    def shortest_count(self) -> int:
        """
        Number of nonzero dual vectors in the box whose norm is shortest_norm.

        Both k and -k are counted. Zero when no dual vector was reached.

        Raises:
            BudgetExceeded: If the count saturated
        """
        if self.shortest_norm is None:
            return 0
        count = int(self.counts[0])
        if count >= self.count_cap:
            raise BudgetExceeded(
                f"{self.rule!r} has at least {self.count_cap} shortest dual vectors"
            )
        return count

    def degree(self) -> TrigDegree:
        """
        Degree implied by the box.

        Returns:
            rho = shortest_norm - 1 with a witness when the shortest norm is
            at most d_max; otherwise the lower bound rho = d_max, not exact
        """
        shortest = self.shortest_norm
        if shortest is None or shortest > self.d_max.d:
            logger.debug("%r: no dual vector of norm <= %d, box-limited", self.rule, self.d_max.d)
            return TrigDegree(rho=self.d_max.d, exact=False)
        return TrigDegree(rho=shortest - 1, exact=True, witness=self.witness())

    def witness(self) -> DualVector:
        """
        Reconstruct the shortest nonzero dual vector from predecessor links.

        The sign is normalized so that the first nonzero component is positive.

        Raises:
            ValueError: If no nonzero dual vector was reached
        """
        if self.shortest_norm is None:
            raise ValueError("no nonzero dual vector reached residue 0")
        k = [0] * self.rule.s
        residue = 0
        for j in range(self.rule.s - 1, -1, -1):
            k[j] = int(self.choices[j, residue])
            started_here = bool(self.from_zero[j, residue])
            residue = (residue - k[j] * self.rule.g[j]) % self.rule.N
            if started_here:
                break
        # -k is dual too; report the representative with a positive leading entry.
        leading = next(k_j for k_j in k if k_j != 0)
        if leading < 0:
            k = [-k_j for k_j in k]
        return DualVector.from_rule(self.rule, k)


def _first_coordinate(
    g_0: int, ks: numpy.ndarray, N: int, cap: int
) -> Tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray, numpy.ndarray]:
    """
    Relaxation of the first coordinate, where every nonzero path starts.

    Only the 2 d_max starting values exist, so this costs O(d_max log d_max)
    instead of a pass over all residues.

    Returns:
        (dist, counts, choices, from_zero) rows for coordinate 0
    """
    nonzero = ks[ks != 0]
    # Smallest norm first, then smallest k, as in the blocked relaxation.
    ordered = nonzero[numpy.lexsort((nonzero, numpy.abs(nonzero)))]
    norms = numpy.abs(ordered)
    reached, first, inverse = numpy.unique(
        (ordered * g_0) % N, return_index=True, return_inverse=True
    )
    inverse = inverse.ravel()
    shortest = norms[first]

    dist = numpy.full(N, UNREACHED, dtype=numpy.int64)
    dist[reached] = shortest
    counts = numpy.zeros(N, dtype=numpy.int64)
    minimal = norms == shortest[inverse]
    counts[reached] = numpy.minimum(numpy.bincount(inverse[minimal], minlength=reached.size), cap)
    choices = numpy.zeros(N, dtype=numpy.int64)
    choices[reached] = ordered[first]
    from_zero = numpy.zeros(N, dtype=bool)
    from_zero[reached] = True
    return dist, counts, choices, from_zero


def relax_residues(
    rule: LatticeRule,
    d_max: Union[int, BoxRadius],
    config: Optional[EngineConfig] = None,
) -> DegreeDPState:
    """
    Run the residue relaxation and keep the predecessor links and path counts.

    Among paths of equal norm the smallest k_j wins at every coordinate,
    which makes the witness deterministic.

    Raises:
        BudgetExceeded: If N * (2 d_max + 1) * s exceeds the op budget
    """
    d_max = BoxRadius.coerce(d_max)
    config = config if config is not None else DEFAULT_CONFIG
    N, width = rule.N, 2 * d_max.d + 1
    ops = N * width * rule.s
    if ops > config.op_budget:
        raise BudgetExceeded(f"degree DP needs {ops} updates, budget is {config.op_budget}")
    if N > 2**31 or d_max.d >= 2**31:
        raise BudgetExceeded(f"N={N}, d_max={d_max.d} too large for 64-bit residue arithmetic")

    residues = numpy.arange(N, dtype=numpy.int64)
    ks = numpy.arange(-d_max.d, d_max.d + 1, dtype=numpy.int64)
    block = max(1, _BLOCK_ELEMENTS // N)
    cap = _COUNT_LIMIT // (width + 2)

    choices = numpy.zeros((rule.s, N), dtype=numpy.int64)
    from_zero = numpy.zeros((rule.s, N), dtype=bool)
    dist, counts, choices[0], from_zero[0] = _first_coordinate(rule.g[0], ks, N, cap)
    for j in range(1, rule.s):
        g_j = rule.g[j]
        best = numpy.full(N, UNREACHED, dtype=numpy.int64)
        best_count = numpy.zeros(N, dtype=numpy.int64)
        best_k = numpy.zeros(N, dtype=numpy.int64)
        best_zero = numpy.zeros(N, dtype=bool)
        for start in range(0, width, block):
            k_block = ks[start : start + block]
            # Extend an existing nonzero prefix by k_j.
            sources = (residues[None, :] - k_block[:, None] * g_j) % N
            extended = numpy.minimum(dist[sources] + numpy.abs(k_block)[:, None], UNREACHED)
            extended_count = counts[sources]
            # Start the nonzero part at this coordinate: residue k_j g_j, norm |k_j|.
            started = numpy.full_like(extended, UNREACHED)
            started_count = numpy.zeros_like(extended_count)
            rows = numpy.nonzero(k_block)[0]
            cols = (k_block[rows] * g_j) % N
            started[rows, cols] = numpy.abs(k_block[rows])
            started_count[rows, cols] = 1
            use_start = started < extended
            candidate = numpy.where(use_start, started, extended)
            candidate_count = numpy.where(
                use_start,
                started_count,
                numpy.where(started == extended, started_count + extended_count, extended_count),
            )

            pick = numpy.argmin(candidate, axis=0)
            block_best = candidate[pick, residues]
            block_count = numpy.where(candidate == block_best[None, :], candidate_count, 0).sum(
                axis=0
            )
            improved = block_best < best
            tied = block_best == best
            best_count = numpy.where(
                improved, block_count, numpy.where(tied, best_count + block_count, best_count)
            )
            best_count = numpy.minimum(best_count, cap)
            best = numpy.where(improved, block_best, best)
            best_k = numpy.where(improved, k_block[pick], best_k)
            best_zero = numpy.where(improved, use_start[pick, residues], best_zero)
        dist = best
        counts = best_count
        choices[j] = best_k
        from_zero[j] = best_zero
    return DegreeDPState(rule, d_max, dist, counts, cap, choices, from_zero)


def trig_degree_dp(
    rule: LatticeRule,
    d_max: Union[int, BoxRadius],
    config: Optional[EngineConfig] = None,
) -> TrigDegree:
    """
    Trigonometric degree from the shortest nonzero dual vector in the box.

    Args:
        rule: Rule to analyse
        d_max: Box radius of the search; components are limited to
            |k_j| <= d_max
        config: Budgets; None selects the defaults

    Returns:
        rho = (shortest norm) - 1 with exact=True and a witness when the
        shortest norm is at most d_max; otherwise rho = d_max with
        exact=False. With d_max >= N the result is always exact, since
        (N, 0, ..., 0) is a dual vector of norm N.

    Raises:
        BudgetExceeded: If N * (2 d_max + 1) * s exceeds the op budget
    """
    return relax_residues(rule, d_max, config).degree()


def trig_degree(rule: LatticeRule, config: Optional[EngineConfig] = None) -> TrigDegree:
    """Exact trigonometric degree, via trig_degree_dp with d_max = N."""
    return trig_degree_dp(rule, rule.N, config)


def l1_sphere(s: int, norm: int) -> Iterator[Tuple[int, ...]]:
    """All integer vectors of length s with l1 norm exactly `norm`, lexicographically."""
    if s == 1:
        if norm == 0:
            yield (0,)
        else:
            yield (-norm,)
            yield (norm,)
        return
    for first in range(-norm, norm + 1):
        for rest in l1_sphere(s - 1, norm - abs(first)):
            yield (first,) + rest


def minimal_dual_vectors(rule: LatticeRule, norm: int) -> List[DualVector]:
    """
    Every nonzero dual vector of the given l1 norm, in lexicographic order.

    Intended for small norms; the sphere grows like norm^(s-1).
    """
    if norm < 1:
        raise ValueError(f"norm must be positive, got {norm}")
    return [DualVector(k) for k in l1_sphere(rule.s, norm) if is_dual(rule, k)]
