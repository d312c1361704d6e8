"""
Abstract generating vector search.

A search walks a candidate space of generating vectors for fixed (N, s) and
keeps the rule with the best objective:

- larger trigonometric degree rho wins;
- on equal rho, fewer minimal dual vectors M(rho + 1), counted in the box of
  radius rho + 1, wins;
- on equal (rho, M(rho + 1)), the lexicographically smaller g wins.

The abstract class owns scoring, pruning and merging; concrete strategies only
declare their candidate stream through the generate_candidates hook.
Candidates are evaluated in stream order and only a strict improvement
replaces the incumbent, so the result is deterministic for a given stream.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Dict, Iterator, List, Optional, Set, Tuple

from ..config import DEFAULT_CONFIG, EngineConfig
from ..degree.degree import relax_residues
from ..lattice.errors import (
    EmptyGenerator,
    InvalidSearchSpec,
    ModulusTooSmall,
    NoValidCandidate,
    TrialsZero,
)
from ..lattice.rule import LatticeRule, TrigDegree

logger = logging.getLogger(__name__)

STRATEGIES = ("exhaustive", "korobov", "random")

# (generating vector, strategy label such as the Korobov parameter)
Candidate = Tuple[Tuple[int, ...], Optional[int]]


@dataclass(frozen=True)
class SearchSpec:
    """
    What to search for and how.

    Attributes:
        N: Modulus
        s: Dimension
        strategy: One of "exhaustive", "korobov", "random"
        trials: Number of random draws; required for random, absent otherwise
        seed: PRNG seed; required for random, absent otherwise
        prune_symmetry: Exhaustive only; evaluate one representative per
            symmetry orbit
        dedup: Random only; repeated draws do not count as trials
        keep: Maximum number of runner-ups reported
    """

    N: int
    s: int
    strategy: str
    trials: Optional[int] = None
    seed: Optional[int] = None
    prune_symmetry: bool = False
    dedup: bool = False
    keep: int = 5

    def __post_init__(self):
        if self.N <= 1:
            raise ModulusTooSmall(f"N must be at least 2, got {self.N}")
        if self.s < 1:
            raise EmptyGenerator(f"dimension must be at least 1, got {self.s}")
        if self.strategy not in STRATEGIES:
            raise InvalidSearchSpec(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.keep < 0:
            raise InvalidSearchSpec(f"keep must be nonnegative, got {self.keep}")
        if self.strategy == "random":
            if self.trials is None or self.seed is None:
                raise InvalidSearchSpec("random search needs both trials and seed")
            if self.trials < 1:
                raise TrialsZero(f"random search needs at least one trial, got {self.trials}")
            if not 0 <= self.seed < 2**64:
                raise InvalidSearchSpec(f"seed must be a 64-bit unsigned value, got {self.seed}")
        elif self.trials is not None or self.seed is not None:
            raise InvalidSearchSpec("trials and seed only apply to random search")
        if self.prune_symmetry and self.strategy != "exhaustive":
            raise InvalidSearchSpec("prune_symmetry only applies to exhaustive search")
        if self.dedup and self.strategy != "random":
            raise InvalidSearchSpec("dedup only applies to random search")


@dataclass(frozen=True)
class CandidateScore:
    """Objective value of one fully scored candidate."""

    g: Tuple[int, ...]
    rho: int
    tie_count: int
    label: Optional[int] = None

    def sort_key(self) -> Tuple[int, int, Tuple[int, ...]]:
        """Smaller is better."""
        return (-self.rho, self.tie_count, self.g)

    def serialize(self) -> Dict[str, Any]:
        return {
            "g": list(self.g),
            "rho": self.rho,
            "tie_count": self.tie_count,
            "label": self.label,
        }

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "CandidateScore":
        return cls(tuple(data["g"]), data["rho"], data["tie_count"], data.get("label"))


class SearchResult:
    """
    Outcome of a search.

    best_rule's recomputed degree equals rho; tie_count is its M(rho + 1);
    runner_ups are the next best fully scored candidates in objective order;
    visited counts the candidates drawn from the strategy's stream.
    """

    def __init__(
        self,
        strategy: str,
        best_rule: LatticeRule,
        rho: TrigDegree,
        tie_count: int,
        runner_ups: Tuple[CandidateScore, ...],
        visited: int,
        label: Optional[int] = None,
    ):
        self.strategy = strategy
        self.best_rule = best_rule
        self.rho = rho
        self.tie_count = tie_count
        self.runner_ups = tuple(runner_ups)
        self.visited = visited
        self.label = label

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SearchResult):
            return NotImplemented
        return self.serialize() == other.serialize()

    def __repr__(self) -> str:
        return (
            f"SearchResult(strategy={self.strategy!r}, best_rule={self.best_rule!r}, "
            f"rho={self.rho.rho}, tie_count={self.tie_count}, visited={self.visited})"
        )

    def serialize(self) -> Dict[str, Any]:
        return {
            "strategy": self.strategy,
            "best_rule": self.best_rule.serialize(),
            "rho": self.rho.serialize(),
            "tie_count": self.tie_count,
            "label": self.label,
            "visited": self.visited,
            "runner_ups": [score.serialize() for score in self.runner_ups],
        }

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "SearchResult":
        return cls(
            strategy=data["strategy"],
            best_rule=LatticeRule.deserialize(data["best_rule"]),
            rho=TrigDegree.deserialize(data["rho"]),
            tie_count=data["tie_count"],
            runner_ups=tuple(CandidateScore.deserialize(item) for item in data["runner_ups"]),
            visited=data["visited"],
            label=data.get("label"),
        )


def count_minimal_duals(rule: LatticeRule, rho: int, config: Optional[EngineConfig] = None) -> int:
    """
    M(rho + 1) for a rule of degree rho.

    Every dual vector of norm rho + 1 lies in the box of radius rho + 1, where
    the residue relaxation counts the shortest ones alongside their norm.

    Raises:
        ValueError: If the rule's degree is not rho
    """
    state = relax_residues(rule, rho + 1, config)
    if state.shortest_norm != rho + 1:
        raise ValueError(f"{rule!r} does not have degree {rho}")
    return state.shortest_count


class AbstractSearchStrategy(ABC):
    """
    Root search strategy.

    apply_strategy orchestrates: draw candidates from generate_candidates,
    score them with the degree kernel (pruned against the incumbent), and merge
    with the objective's tie-break chain.

    Stateless apart from configuration.
    """

    name: ClassVar[str] = ""
    # Streams that may yield the same g twice; repeats count as visited only.
    may_repeat: ClassVar[bool] = False

    def __init__(self, config: Optional[EngineConfig] = None, keep: int = 5):
        """
        Args:
            config: Budgets for the degree kernel and the candidate space
            keep: Maximum number of runner-ups to report
        """
        if keep < 0:
            raise ValueError(f"keep must be nonnegative, got {keep}")
        self.config = config if config is not None else DEFAULT_CONFIG
        self.keep = keep

    def apply_strategy(self, N: int, s: int) -> SearchResult:
        """
        Run the search.

        Args:
            N: Modulus
            s: Dimension

        Returns:
            The objective-maximal rule among the candidates

        Raises:
            NoValidCandidate: If the stream yields no valid rule
            BudgetExceeded: If the strategy's space or a kernel is over budget
        """
        if N <= 1:
            raise ModulusTooSmall(f"N must be at least 2, got {N}")
        if s < 1:
            raise EmptyGenerator(f"dimension must be at least 1, got {s}")

        best: Optional[CandidateScore] = None
        best_degree: Optional[TrigDegree] = None
        runner_ups: List[CandidateScore] = []
        visited = 0
        seen: Set[Tuple[int, ...]] = set()
        for g, label in self.generate_candidates(N, s):
            visited += 1
            if self.may_repeat:
                if g in seen:
                    continue
                seen.add(g)
            scored = self.score_candidate(LatticeRule(N, g), label, best)
            if scored is None:
                continue
            score, degree = scored
            if best is None or score.sort_key() < best.sort_key():
                if best is not None:
                    runner_ups.append(best)
                    logger.debug("new incumbent %s (rho=%d) replaces %s", g, score.rho, best.g)
                best, best_degree = score, degree
            else:
                runner_ups.append(score)
            runner_ups = sorted(runner_ups, key=CandidateScore.sort_key)[: self.keep]

        if best is None:
            raise NoValidCandidate(f"{self.name} search produced no valid rule for N={N}, s={s}")
        logger.info("%s search N=%d s=%d: best %s rho=%d", self.name, N, s, best.g, best.rho)
        return SearchResult(
            strategy=self.name,
            best_rule=LatticeRule(N, best.g),
            rho=best_degree,
            tie_count=best.tie_count,
            runner_ups=tuple(runner_ups),
            visited=visited,
            label=best.label,
        )

    def score_candidate(
        self,
        rule: LatticeRule,
        label: Optional[int],
        incumbent: Optional[CandidateScore],
    ) -> Optional[Tuple[CandidateScore, TrigDegree]]:
        """
        Score a candidate, or discard it early when it cannot beat the incumbent.

        With an incumbent of degree rho*, the degree DP first runs with
        d_max = rho* + 1. A dual vector of norm <= rho* means a strictly worse
        candidate; norm rho* + 1 means a tie on rho; none means a strictly
        better degree, which is then computed exactly. The tie count
        M(rho + 1) comes from the same relaxation as the degree.

        Returns:
            (score, degree) for candidates that were fully scored, None for
            candidates discarded by the cutoff
        """
        degree: Optional[TrigDegree] = None
        if incumbent is not None:
            state = relax_residues(rule, incumbent.rho + 1, self.config)
            degree = state.degree()
            if degree.exact and degree.rho < incumbent.rho:
                return None
        if degree is None or not degree.exact:
            state = relax_residues(rule, rule.N, self.config)
            degree = state.degree()
        return CandidateScore(rule.g, degree.rho, state.shortest_count, label), degree

    @abstractmethod
    def generate_candidates(self, N: int, s: int) -> Iterator[Candidate]:
        """
        Hook declaring the candidate stream.

        Args:
            N: Modulus
            s: Dimension

        Yields:
            (g, label) pairs; g components in 1..N-1
        """
        ...
