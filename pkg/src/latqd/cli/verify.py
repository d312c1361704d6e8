"""
Seeded property suite behind `latqd verify`.

Random small instances are drawn from a seeded SFC64 stream and every
instance runs through each property class:

- oracle: brute, dp, rounded charsum and rounded fft agree exactly
- fft_padding: FFT bins above ds stay within the rounding tolerance
- point_eval: evaluate_W_at matches the brute force polynomial on the unit circle
- degree: the degree DP agrees with the coefficient criterion and its
  witness is a dual vector of norm rho + 1
- symmetry: coefficients are invariant under permutation, negation and units

A failing class reports its smallest failing instance so it can be replayed
with the enumerate and degree commands.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy

from ..config import EngineConfig
from ..degree.degree import trig_degree
from ..engines.abstract_engines import get_engine
from ..engines.exact_engines import brute_force, residue_dp
from ..engines.fourier_engines import evaluate_W_at, fft_enumerator
from ..lattice.enumerator import default_tolerance, eval_poly, trig_degree_from_coeffs
from ..lattice.errors import LatticeError
from ..lattice.rule import LatticeRule, integrates_exactly, is_dual
from ..utilities import box_size, units

logger = logging.getLogger(__name__)

# Instances never exceed this many box points.
MAX_BOX_POINTS = 10**6

# Engine whose output is perturbed by --inject-fault.
FAULT_ENGINE = "fft"


@dataclass(frozen=True)
class VerifyCase:
    """One random instance plus the random side data the properties need."""

    index: int
    N: int
    g: Tuple[int, ...]
    d: int
    z: complex
    unit: int
    order: Tuple[int, ...]
    negate: int

    @property
    def rule(self) -> LatticeRule:
        return LatticeRule(self.N, self.g)

    def size_key(self) -> Tuple[int, int, int, Tuple[int, ...]]:
        """Orders instances from smallest to largest for failure reports."""
        return (box_size(self.d, len(self.g)), self.N, self.d, self.g)

    def describe(self) -> str:
        g = ",".join(str(g_j) for g_j in self.g)
        return f"case {self.index}: --n {self.N} --g {g} --d {self.d}"


def draw_cases(
    cases: int, seed: int, max_n: int = 50, max_s: int = 3, max_d: int = 4
) -> List[VerifyCase]:
    """
    Draw reproducible instances.

    Args:
        cases: Number of instances
        seed: Stream seed
        max_n: Largest modulus (at least 2)
        max_s: Largest dimension
        max_d: Largest box radius

    Raises:
        ValueError: If any bound is out of range
    """
    if cases < 1:
        raise ValueError(f"cases must be at least 1, got {cases}")
    if max_n < 2 or max_s < 1 or max_d < 1:
        raise ValueError(
            f"bounds need max_n >= 2, max_s >= 1, max_d >= 1, got {max_n}, {max_s}, {max_d}"
        )
    rng = numpy.random.Generator(numpy.random.SFC64(seed))
    drawn = []
    for index in range(cases):
        N = int(rng.integers(2, max_n + 1))
        s = int(rng.integers(1, max_s + 1))
        d = int(rng.integers(1, max_d + 1))
        while d > 1 and box_size(d, s) > MAX_BOX_POINTS:
            d -= 1
        g = tuple(int(c) for c in rng.integers(1, N, size=s))
        unit_choices = units(N)
        drawn.append(
            VerifyCase(
                index=index,
                N=N,
                g=g,
                d=d,
                z=complex(numpy.exp(2j * numpy.pi * rng.random())),
                unit=int(unit_choices[int(rng.integers(0, len(unit_choices)))]),
                order=tuple(int(j) for j in rng.permutation(s)),
                negate=int(rng.integers(0, s)),
            )
        )
    return drawn


# ─── Property classes ─────────────────────────────────────────────────────
#
# Each check returns None on success and a failure message otherwise.

PropertyCheck = Callable[[VerifyCase, Optional[EngineConfig], bool], Optional[str]]


def check_oracle(case: VerifyCase, config: Optional[EngineConfig], fault: bool) -> Optional[str]:
    results = {
        name: list(get_engine(name, config).apply_engine(case.rule, case.d).coeffs)
        for name in ("brute", "dp", "charsum", "fft")
    }
    if fault:
        results[FAULT_ENGINE][-1] += 2
    reference = results["brute"]
    for name, coeffs in results.items():
        if coeffs != reference:
            return f"{name} gave {coeffs}, brute gave {reference}"
    return None


def check_fft_padding(
    case: VerifyCase, config: Optional[EngineConfig], fault: bool
) -> Optional[str]:
    padding = fft_enumerator(case.rule, case.d, config).padding_residual
    tol = default_tolerance(case.rule, case.d)
    if padding > tol:
        return f"padding {padding:.3e} above tol {tol:.3e}"
    return None


def check_point_eval(
    case: VerifyCase, config: Optional[EngineConfig], fault: bool
) -> Optional[str]:
    W = brute_force(case.rule, case.d, config)
    expected = eval_poly(W, case.z)
    actual = evaluate_W_at(case.rule, case.d, case.z, config)
    bound = 1e-8 * eval_poly(W, 1.0)
    if abs(actual - expected) > bound:
        return f"W({case.z}) = {actual}, polynomial gives {expected}"
    return None


def check_degree(case: VerifyCase, config: Optional[EngineConfig], fault: bool) -> Optional[str]:
    rule = case.rule
    degree = trig_degree(rule, config)
    if not degree.exact or degree.rho > rule.N - 1:
        return f"trig_degree gave {degree!r}, expected exact rho <= {rule.N - 1}"
    witness = degree.witness
    if not is_dual(rule, witness.k) or witness.norm != degree.rho + 1:
        return f"witness {witness.k} is not a dual vector of norm {degree.rho + 1}"
    if integrates_exactly(rule, witness.k):
        return f"rule integrates the witness monomial {witness.k} exactly"
    from_coeffs = trig_degree_from_coeffs(brute_force(rule, case.d, config))
    if from_coeffs.exact and from_coeffs.rho != degree.rho:
        return f"coefficients give rho={from_coeffs.rho}, DP gives rho={degree.rho}"
    if not from_coeffs.exact and degree.rho < case.d:
        return f"coefficients show no dual vector of norm <= {case.d}, DP gives rho={degree.rho}"
    return None


def check_symmetry(case: VerifyCase, config: Optional[EngineConfig], fault: bool) -> Optional[str]:
    rule = case.rule
    reference = residue_dp(rule, case.d, config).coeffs
    variants = {
        f"permutation {case.order}": rule.permute(case.order),
        f"negation of coordinate {case.negate}": rule.negate_coordinate(case.negate),
        f"unit {case.unit}": rule.apply_unit(case.unit),
    }
    for label, variant in variants.items():
        coeffs = residue_dp(variant, case.d, config).coeffs
        if coeffs != reference:
            return f"{label} changed {list(reference)} to {list(coeffs)}"
    return None


PROPERTY_CLASSES: Dict[str, PropertyCheck] = {
    "oracle": check_oracle,
    "fft_padding": check_fft_padding,
    "point_eval": check_point_eval,
    "degree": check_degree,
    "symmetry": check_symmetry,
}


# ─── Report ───────────────────────────────────────────────────────────────


@dataclass
class ClassOutcome:
    """Failures of one property class, in case order."""

    name: str
    failures: List[Tuple[VerifyCase, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def minimal_failure(self) -> Optional[Tuple[VerifyCase, str]]:
        if not self.failures:
            return None
        return min(self.failures, key=lambda failure: failure[0].size_key())


@dataclass
class VerifyReport:
    seed: int
    cases: int
    outcomes: List[ClassOutcome]

    @property
    def passed(self) -> bool:
        return all(outcome.passed for outcome in self.outcomes)

    def render_text(self) -> str:
        lines = []
        for outcome in self.outcomes:
            if outcome.passed:
                lines.append(f"{outcome.name}: PASS")
                continue
            case, message = outcome.minimal_failure()
            lines.append(f"{outcome.name}: FAIL ({len(outcome.failures)} of {self.cases} cases)")
            lines.append(f"  minimal failing instance: {case.describe()}")
            lines.append(f"  {message}")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"verify: {verdict} ({self.cases} cases)")
        return "\n".join(lines) + "\n"

    def serialize(self) -> Dict[str, Any]:
        classes = []
        for outcome in self.outcomes:
            entry: Dict[str, Any] = {"name": outcome.name, "passed": outcome.passed}
            minimal = outcome.minimal_failure()
            if minimal is not None:
                case, message = minimal
                entry["failures"] = len(outcome.failures)
                entry["minimal"] = {
                    "N": case.N,
                    "g": list(case.g),
                    "d": case.d,
                    "case": case.index,
                    "message": message,
                }
            classes.append(entry)
        return {"seed": self.seed, "cases": self.cases, "passed": self.passed, "classes": classes}


def run_verify(
    cases: int,
    seed: int = 0,
    max_n: int = 50,
    max_s: int = 3,
    max_d: int = 4,
    config: Optional[EngineConfig] = None,
    inject_fault: bool = False,
) -> VerifyReport:
    """
    Run every property class over `cases` seeded instances.

    Library errors raised inside a check (ResidualTooLarge, InvariantViolation)
    count as failures of that class.

    Args:
        cases: Number of instances
        seed: Stream seed; equal seeds give byte-identical reports
        max_n: Largest modulus
        max_s: Largest dimension
        max_d: Largest box radius
        config: Engine configuration; None selects the defaults
        inject_fault: Perturb one engine's coefficients, for harness self-tests

    Returns:
        The per-class report
    """
    instances = draw_cases(cases, seed, max_n, max_s, max_d)
    outcomes = []
    for name, check in PROPERTY_CLASSES.items():
        outcome = ClassOutcome(name)
        for case in instances:
            try:
                message = check(case, config, inject_fault)
            except LatticeError as error:
                message = f"{type(error).__name__}: {error}"
            if message is not None:
                outcome.failures.append((case, message))
        if outcome.failures:
            logger.warning("%s failed on %d cases", name, len(outcome.failures))
        outcomes.append(outcome)
    return VerifyReport(seed=seed, cases=cases, outcomes=outcomes)
