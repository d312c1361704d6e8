"""
Weight enumerator polynomials.

W(z) = sum_a M(a) z^a, where M(a) counts the integer vectors k in the box
{-d..d}^s with k . g = 0 (mod N) and |k|_1 = a. WeightEnumerator holds the
exact integer coefficients; FloatEnumerator holds the real coefficients that
the Fourier engines produce, together with how far they sit from integers.
round_coeffs is the only bridge between the two.
"""

import logging
import math
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy

from ..utilities import box_size
from .errors import BudgetExceeded, InvariantViolation, ResidualTooLarge
from .rule import BoxRadius, LatticeRule, TrigDegree

logger = logging.getLogger(__name__)

# Coefficients are held in signed 64-bit integers by the array engines.
COEFFICIENT_LIMIT = 2**63 - 1

Scalar = Union[int, float, complex]


def check_box_fits(d: Union[int, BoxRadius], s: int) -> None:
    """
    Reject boxes whose point count does not fit the 63-bit coefficient budget.

    Raises:
        BudgetExceeded: If (2d + 1)^s > 2^63 - 1
    """
    d = BoxRadius.coerce(d).d
    if box_size(d, s) > COEFFICIENT_LIMIT:
        raise BudgetExceeded(f"box (2*{d}+1)^{s} overflows 63-bit coefficients")


def default_tolerance(rule: LatticeRule, d: Union[int, BoxRadius]) -> float:
    """
    Rounding tolerance scaled to the expected coefficient magnitude.

    The average coefficient grows like (2d + 1)^s / N, and the absolute
    rounding error of the floating point engines grows with it.
    """
    d = BoxRadius.coerce(d).d
    return 1e-6 * max(1.0, box_size(d, rule.s) / rule.N)


class WeightEnumerator:
    """
    Exact weight enumerator of a rule for a box radius d.

    Invariants, checked on construction: len(coeffs) == d*s + 1,
    coeffs[0] == 1, every coefficient nonnegative, and every coefficient at
    a >= 1 even (k and -k are both dual). residual records how far the
    floating point source was from integers, or None for exact engines.
    """

    def __init__(
        self,
        rule: LatticeRule,
        d: Union[int, BoxRadius],
        coeffs: Iterable[int],
        residual: Optional[float] = None,
    ):
        """
        Args:
            rule: The rule being described
            d: Box radius
            coeffs: M(0), ..., M(d*s)
            residual: Largest distance to an integer seen before rounding

        Raises:
            BudgetExceeded: If the box is too large for 64-bit coefficients
            InvariantViolation: If the coefficients break an invariant
        """
        d = BoxRadius.coerce(d)
        check_box_fits(d, rule.s)
        values = tuple(int(c) for c in coeffs)
        expected = d.d * rule.s + 1
        if len(values) != expected:
            raise InvariantViolation(f"expected {expected} coefficients, got {len(values)}")
        if values[0] != 1:
            raise InvariantViolation(f"M(0) must be 1, got {values[0]}")
        for a, count in enumerate(values):
            if count < 0:
                raise InvariantViolation(f"M({a}) = {count} is negative")
            if a >= 1 and count % 2:
                raise InvariantViolation(f"M({a}) = {count} is odd; k and -k pair up")
        self._rule = rule
        self._d = d
        self._coeffs = values
        self._residual = residual

    @property
    def rule(self) -> LatticeRule:
        return self._rule

    @property
    def d(self) -> BoxRadius:
        return self._d

    @property
    def coeffs(self) -> Tuple[int, ...]:
        """M(0), ..., M(d*s)."""
        return self._coeffs

    @property
    def residual(self) -> Optional[float]:
        return self._residual

    @property
    def total(self) -> int:
        """W(1): number of dual lattice points in the box."""
        return sum(self._coeffs)

    def as_array(self) -> numpy.ndarray:
        return numpy.asarray(self._coeffs, dtype=numpy.int64)

    def __eq__(self, other: object) -> bool:
        # Residual is provenance, not content.
        if not isinstance(other, WeightEnumerator):
            return NotImplemented
        return (self._rule, self._d, self._coeffs) == (other._rule, other._d, other._coeffs)

    def __hash__(self) -> int:
        return hash((self._rule, self._d, self._coeffs))

    def __repr__(self) -> str:
        return f"WeightEnumerator(rule={self._rule!r}, d={self._d.d}, coeffs={list(self._coeffs)})"

    def serialize(self) -> Dict[str, Any]:
        return {
            "rule": self._rule.serialize(),
            "d": self._d.d,
            "coeffs": list(self._coeffs),
            "residual": self._residual,
        }

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "WeightEnumerator":
        return cls(
            rule=LatticeRule.deserialize(data["rule"]),
            d=data["d"],
            coeffs=data["coeffs"],
            residual=data.get("residual"),
        )


class FloatEnumerator:
    """
    Real-valued enumerator coefficients from a floating point engine.

    max_residual is the largest distance from a coefficient to its nearest
    integer, folded together with the magnitude of any padding bins the engine
    expected to be zero. It is always recorded, never discarded.
    """

    def __init__(
        self,
        rule: LatticeRule,
        d: Union[int, BoxRadius],
        coeffs: Sequence[float],
        padding: Optional[Sequence[float]] = None,
    ):
        """
        Args:
            rule: The rule being described
            d: Box radius
            coeffs: Real approximations of M(0), ..., M(d*s)
            padding: Values the engine produced beyond index d*s, which should
                be numerically zero

        Raises:
            ValueError: If the coefficient count is not d*s + 1
        """
        d = BoxRadius.coerce(d)
        values = numpy.array(coeffs, dtype=numpy.float64)
        expected = d.d * rule.s + 1
        if values.shape != (expected,):
            raise ValueError(f"expected {expected} coefficients, got shape {values.shape}")
        pad = numpy.array(padding if padding is not None else [], dtype=numpy.float64)
        values.setflags(write=False)
        pad.setflags(write=False)
        self._rule = rule
        self._d = d
        self._coeffs = values
        self._padding = pad
        self._coefficient_residual = float(numpy.max(numpy.abs(values - numpy.rint(values))))
        self._padding_residual = float(numpy.max(numpy.abs(pad))) if pad.size else 0.0

    @property
    def rule(self) -> LatticeRule:
        return self._rule

    @property
    def d(self) -> BoxRadius:
        return self._d

    @property
    def coeffs(self) -> numpy.ndarray:
        """Read-only real coefficients."""
        return self._coeffs

    @property
    def padding(self) -> numpy.ndarray:
        """Read-only padding bins (empty for engines without padding)."""
        return self._padding

    @property
    def padding_residual(self) -> float:
        return self._padding_residual

    @property
    def max_residual(self) -> float:
        return max(self._coefficient_residual, self._padding_residual)

    def __repr__(self) -> str:
        return (
            f"FloatEnumerator(rule={self._rule!r}, d={self._d.d}, "
            f"max_residual={self.max_residual:.3e})"
        )


def eval_poly(W: WeightEnumerator, z: Scalar) -> Scalar:
    """
    Evaluate W at z by Horner's rule.

    Integer z gives an exact integer; float and complex z follow Python's
    usual promotion.
    """
    result: Scalar = 0
    for count in reversed(W.coeffs):
        result = result * z + count
    return result


def degree_from_coefficients(coeffs: Sequence[int], d: int) -> TrigDegree:
    """
    Degree formula on a raw coefficient list.

    rho is 0 when M(1) != 0, otherwise the largest a such that M(1..a) are all
    zero. The value is exact only when rho < d: every dual vector of norm at
    most d lies inside the box, so a nonzero M(rho + 1) with rho + 1 <= d is
    conclusive, while zeros beyond d may be an artefact of the box.

    Args:
        coeffs: M(0), M(1), ...
        d: Box radius the coefficients were computed for

    Returns:
        TrigDegree without witness
    """
    rho = 0
    for a in range(1, len(coeffs)):
        if coeffs[a] != 0:
            break
        rho = a
    return TrigDegree(rho=rho, exact=rho < d)


def trig_degree_from_coeffs(W: WeightEnumerator) -> TrigDegree:
    """
    Trigonometric degree from a weight enumerator.

    Scans the whole coefficient list up to d*s but flags the result as exact
    only when rho < d. No witness is attached since coefficients carry no
    vectors.
    """
    return degree_from_coefficients(W.coeffs, W.d.d)


def round_coeffs(fe: FloatEnumerator, tol: Optional[float] = None) -> WeightEnumerator:
    """
    Round a floating point enumerator to exact integers.

    Args:
        fe: Floating point enumerator
        tol: Maximum allowed distance to an integer (and padding magnitude).
            None selects default_tolerance(fe.rule, fe.d).

    Returns:
        WeightEnumerator with residual set to fe.max_residual

    Raises:
        ValueError: If tol is not positive
        ResidualTooLarge: If some coefficient or padding bin is farther than
            tol from an integer (numerical breakdown)
        InvariantViolation: If the rounded coefficients are negative, odd at
            a >= 1, or M(0) != 1 (engine bug)
    """
    if tol is None:
        tol = default_tolerance(fe.rule, fe.d)
    if not tol > 0 or math.isnan(tol):
        raise ValueError(f"tol must be positive, got {tol}")

    distances = numpy.abs(fe.coeffs - numpy.rint(fe.coeffs))
    if distances.size and distances.max() > tol:
        a = int(numpy.argmax(distances))
        raise ResidualTooLarge(
            f"M({a}) = {fe.coeffs[a]!r} is {distances[a]:.3e} from an integer (tol {tol:.3e})"
        )
    if fe.padding_residual > tol:
        raise ResidualTooLarge(
            f"padding bins reach {fe.padding_residual:.3e}, above tol {tol:.3e}"
        )

    logger.debug("rounding %r with residual %.3e (tol %.3e)", fe.rule, fe.max_residual, tol)
    rounded = [int(c) for c in numpy.rint(fe.coeffs)]
    return WeightEnumerator(fe.rule, fe.d, rounded, residual=fe.max_residual)
