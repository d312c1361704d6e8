"""
Concrete search strategies.

Each strategy fulfills AbstractSearchStrategy's generate_candidates contract:

- ExhaustiveSearch scans {1..N-1}^s in lexicographic order, optionally keeping
  one representative per symmetry orbit.
- KorobovSearch scans the Korobov vectors (1, a, ..., a^(s-1)) mod N.
- RandomSearch draws components uniformly from a seeded SFC64 generator.
"""

import itertools
import logging
from typing import Iterator, Optional, Set, Tuple

import numpy

from ..config import EngineConfig
from ..lattice.errors import BudgetExceeded, TrialsZero
from ..utilities import korobov_vector, units
from .abstract_search import (
    AbstractSearchStrategy,
    Candidate,
    SearchResult,
    SearchSpec,
)

logger = logging.getLogger(__name__)


def canonical_form(g: Tuple[int, ...], N: int) -> Tuple[int, ...]:
    """
    Lexicographically smallest vector in the symmetry orbit of g.

    The orbit is generated by multiplication with units of Z_N, coordinate
    permutations and g_j -> N - g_j per coordinate; all three preserve the
    weight enumerator. For a fixed unit the smallest arrangement takes
    min(h_j, N - h_j) per coordinate and sorts.
    """
    return min(
        tuple(sorted(min((u * g_j) % N, N - (u * g_j) % N) for g_j in g)) for u in units(N)
    )


class ExhaustiveSearch(AbstractSearchStrategy):
    """Full scan of {1..N-1}^s."""

    name = "exhaustive"

    def __init__(
        self,
        config: Optional[EngineConfig] = None,
        keep: int = 5,
        prune_symmetry: bool = False,
    ):
        """
        Args:
            config: Budgets; search_budget bounds (N - 1)^s
            keep: Maximum number of runner-ups
            prune_symmetry: Evaluate only candidates equal to their orbit's
                canonical form. The optimum is unchanged, since the overall
                winner is the smallest member of its own orbit; visited then
                counts representatives only.
        """
        super().__init__(config, keep)
        self.prune_symmetry = prune_symmetry

    def generate_candidates(self, N: int, s: int) -> Iterator[Candidate]:
        space = (N - 1) ** s
        if space > self.config.search_budget:
            raise BudgetExceeded(
                f"exhaustive search over {space} candidates exceeds budget "
                f"{self.config.search_budget}"
            )
        for g in itertools.product(range(1, N), repeat=s):
            if self.prune_symmetry and canonical_form(g, N) != g:
                continue
            yield g, None


class KorobovSearch(AbstractSearchStrategy):
    """Scan of Korobov vectors; the label is the parameter a."""

    name = "korobov"

    def generate_candidates(self, N: int, s: int) -> Iterator[Candidate]:
        for a in range(1, N):
            g = korobov_vector(a, N, s)
            if 0 in g:
                logger.debug("korobov a=%d has a zero component mod %d, skipped", a, N)
                continue
            yield g, a


class RandomSearch(AbstractSearchStrategy):
    """
    Seeded uniform sampling.

    Components are drawn from numpy's SFC64 bit generator, a small-state
    generator in the same class as xoshiro, so identical seeds reproduce
    identical streams. Repeated draws are never rescored.
    """

    name = "random"
    may_repeat = True

    def __init__(
        self,
        trials: int,
        seed: int,
        config: Optional[EngineConfig] = None,
        keep: int = 5,
        dedup: bool = False,
    ):
        """
        Args:
            trials: Number of draws (distinct draws when dedup is set)
            seed: 64-bit seed
            config: Budgets for the degree kernel
            keep: Maximum number of runner-ups
            dedup: Keep drawing until `trials` distinct vectors were seen, or
                the whole space was

        Raises:
            TrialsZero: If trials < 1
        """
        super().__init__(config, keep)
        if trials < 1:
            raise TrialsZero(f"random search needs at least one trial, got {trials}")
        self.trials = trials
        self.seed = seed
        self.dedup = dedup

    def generate_candidates(self, N: int, s: int) -> Iterator[Candidate]:
        rng = numpy.random.Generator(numpy.random.SFC64(self.seed))
        if not self.dedup:
            for _ in range(self.trials):
                yield tuple(int(c) for c in rng.integers(1, N, size=s)), None
            return

        target = min(self.trials, (N - 1) ** s)
        seen: Set[Tuple[int, ...]] = set()
        while len(seen) < target:
            g = tuple(int(c) for c in rng.integers(1, N, size=s))
            if g not in seen:
                seen.add(g)
                yield g, None


def strategy_from_spec(
    spec: SearchSpec, config: Optional[EngineConfig] = None
) -> AbstractSearchStrategy:
    """Build the strategy object a SearchSpec describes."""
    if spec.strategy == "exhaustive":
        return ExhaustiveSearch(config, spec.keep, prune_symmetry=spec.prune_symmetry)
    if spec.strategy == "korobov":
        return KorobovSearch(config, spec.keep)
    return RandomSearch(spec.trials, spec.seed, config, spec.keep, dedup=spec.dedup)


def search(spec: SearchSpec, config: Optional[EngineConfig] = None) -> SearchResult:
    """Run whichever strategy the SearchSpec names."""
    return strategy_from_spec(spec, config).apply_strategy(spec.N, spec.s)


def exhaustive_search(spec: SearchSpec, config: Optional[EngineConfig] = None) -> SearchResult:
    """
    Scan all of {1..N-1}^s.

    Raises:
        BudgetExceeded: If (N - 1)^s exceeds the search budget
    """
    if spec.strategy != "exhaustive":
        raise ValueError(f"exhaustive_search got a {spec.strategy!r} spec")
    return search(spec, config)


def korobov_search(
    N: int, s: int, config: Optional[EngineConfig] = None, keep: int = 5
) -> SearchResult:
    """
    Scan Korobov vectors for a in 1..N-1, skipping those with a zero component.

    Raises:
        NoValidCandidate: If every a produces a zero component
    """
    return search(SearchSpec(N=N, s=s, strategy="korobov", keep=keep), config)


def random_search(spec: SearchSpec, config: Optional[EngineConfig] = None) -> SearchResult:
    """
    Score `trials` uniform draws from {1..N-1}^s.

    Raises:
        TrialsZero: If trials < 1
    """
    if spec.strategy != "random":
        raise ValueError(f"random_search got a {spec.strategy!r} spec")
    return search(spec, config)
