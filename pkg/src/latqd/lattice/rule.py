"""
Core value types for rank-1 lattice rules.

A rank-1 lattice rule with modulus N and generating vector g averages a function
over the N points {n * g / N}, n = 0..N-1, taken componentwise modulo one. The
types here are immutable: every transformation returns a new, revalidated
instance. Serialization produces plain dicts of ints, floats and bools.
"""

import operator
from typing import Any, Callable, Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy

from ..utilities import is_unit
from .errors import (
    EmptyGenerator,
    GeneratorOutOfRange,
    InvalidBoxRadius,
    LatticeError,
    ModulusTooSmall,
    NotAUnit,
)


def _as_int(value: Any, name: str) -> int:
    """Accept Python and numpy integers, reject floats and bools."""
    if isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, got bool")
    try:
        return operator.index(value)
    except TypeError:
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}") from None


class LatticeRule:
    """
    Immutable rank-1 lattice rule (N, g).

    Invariants: N >= 2, s >= 1 and every g_j in 1..N-1. Components are never
    reduced modulo N on the caller's behalf; out of range components are an
    error. Generators need not be coprime to N.
    """

    def __init__(self, N: int, g: Iterable[int]):
        """
        Construct and validate a lattice rule.

        Args:
            N: Modulus, at least 2
            g: Generating vector components, each in 1..N-1

        Raises:
            ModulusTooSmall: If N <= 1
            EmptyGenerator: If g has no components
            GeneratorOutOfRange: If some component is outside 1..N-1
        """
        N = _as_int(N, "N")
        components = tuple(_as_int(g_j, f"g[{j}]") for j, g_j in enumerate(g))
        if N <= 1:
            raise ModulusTooSmall(f"N must be at least 2, got {N}")
        if not components:
            raise EmptyGenerator("generating vector must have at least one component")
        for j, g_j in enumerate(components):
            if not 1 <= g_j <= N - 1:
                raise GeneratorOutOfRange(f"g[{j}]={g_j} outside 1..{N - 1}")
        self._N = N
        self._g = components

    @property
    def N(self) -> int:
        """Modulus, equal to the number of quadrature points."""
        return self._N

    @property
    def g(self) -> Tuple[int, ...]:
        """Generating vector."""
        return self._g

    @property
    def s(self) -> int:
        """Dimension."""
        return len(self._g)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticeRule):
            return NotImplemented
        return self._N == other._N and self._g == other._g

    def __hash__(self) -> int:
        return hash((self._N, self._g))

    def __repr__(self) -> str:
        return f"LatticeRule(N={self._N}, g={list(self._g)})"

    # Symmetric rules

    def apply_unit(self, u: int) -> "LatticeRule":
        """See apply_unit."""
        return apply_unit(self, u)

    def permute(self, order: Sequence[int]) -> "LatticeRule":
        """
        Reorder coordinates.

        Args:
            order: A permutation of range(s); coordinate j of the result is
                coordinate order[j] of this rule

        Returns:
            New rule with permuted generating vector

        Raises:
            ValueError: If order is not a permutation of range(s)
        """
        if sorted(order) != list(range(self.s)):
            raise ValueError(f"order must be a permutation of range({self.s}), got {order}")
        return LatticeRule(self._N, [self._g[i] for i in order])

    def negate_coordinate(self, j: int) -> "LatticeRule":
        """Replace g_j by N - g_j."""
        g = list(self._g)
        g[j] = self._N - g[j]
        return LatticeRule(self._N, g)

    # Quadrature

    def points(self) -> numpy.ndarray:
        """
        The quadrature points as an (N, s) float array.

        Row n holds ((n * g_j) mod N) / N, computed in integers before the
        division so that no fractional-part rounding is involved.
        """
        n = numpy.arange(self._N, dtype=numpy.int64)[:, None]
        g = numpy.asarray(self._g, dtype=numpy.int64)[None, :]
        return ((n * g) % self._N) / self._N

    def integrate(self, f: Callable[[numpy.ndarray], numpy.ndarray]) -> Union[float, complex]:
        """
        Apply the rule to f.

        Args:
            f: Vectorized integrand mapping an (N, s) array of points to N values

        Returns:
            (1/N) times the sum of f over the lattice points
        """
        values = numpy.asarray(f(self.points()))
        if values.shape != (self._N,):
            raise ValueError(f"integrand must return {self._N} values, got shape {values.shape}")
        total = values.sum() / self._N
        return complex(total) if numpy.iscomplexobj(total) else float(total)

    # Serialization

    def serialize(self) -> Dict[str, Any]:
        """Convert to a dict with "N", "s" and "g" fields."""
        return {"N": self._N, "s": self.s, "g": list(self._g)}

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "LatticeRule":
        """Reconstruct from serialize() output. The redundant "s" field is checked."""
        rule = cls(data["N"], data["g"])
        if "s" in data and data["s"] != rule.s:
            raise ValueError(f"serialized s={data['s']} disagrees with len(g)={rule.s}")
        return rule


class BoxRadius:
    """Half-width d of the index box {-d..d}^s; d >= 1."""

    def __init__(self, d: int):
        d = _as_int(d, "d")
        if d < 1:
            raise InvalidBoxRadius(f"box radius must be at least 1, got {d}")
        self._d = d

    @property
    def d(self) -> int:
        return self._d

    @classmethod
    def coerce(cls, d: Union[int, "BoxRadius"]) -> "BoxRadius":
        """Accept either a BoxRadius or a plain integer."""
        return d if isinstance(d, BoxRadius) else cls(d)

    def __int__(self) -> int:
        return self._d

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BoxRadius):
            return self._d == other._d
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._d)

    def __repr__(self) -> str:
        return f"BoxRadius({self._d})"


class DualVector:
    """
    Integer frequency vector k carried with its l1 norm.

    A DualVector is only meaningful together with a rule for which
    k . g = 0 (mod N); build one with from_rule to have that checked.
    """

    def __init__(self, k: Iterable[int]):
        self._k = tuple(_as_int(k_j, f"k[{j}]") for j, k_j in enumerate(k))
        self._norm = sum(abs(k_j) for k_j in self._k)

    @classmethod
    def from_rule(cls, rule: LatticeRule, k: Iterable[int]) -> "DualVector":
        """
        Build a dual vector of rule, checking the congruence.

        Raises:
            LatticeError: If the length differs from s or k . g is not 0 mod N
        """
        vector = cls(k)
        if len(vector.k) != rule.s:
            raise LatticeError(f"dual vector has {len(vector.k)} components, rule has s={rule.s}")
        if not is_dual(rule, vector.k):
            raise LatticeError(f"{list(vector.k)} is not in the dual lattice of {rule!r}")
        return vector

    @property
    def k(self) -> Tuple[int, ...]:
        return self._k

    @property
    def norm(self) -> int:
        """l1 norm |k_1| + ... + |k_s|."""
        return self._norm

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DualVector):
            return NotImplemented
        return self._k == other._k

    def __hash__(self) -> int:
        return hash(self._k)

    def __repr__(self) -> str:
        return f"DualVector(k={list(self._k)}, norm={self._norm})"

    def serialize(self) -> Dict[str, Any]:
        return {"k": list(self._k), "norm": self._norm}

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "DualVector":
        vector = cls(data["k"])
        if data.get("norm", vector.norm) != vector.norm:
            raise ValueError(f"serialized norm {data['norm']} disagrees with k={data['k']}")
        return vector


class TrigDegree:
    """
    Trigonometric degree rho of a rule.

    exact is True when rho is certified: a dual vector of norm rho + 1 exists
    and none of smaller nonzero norm does. When False, rho is only the
    box-limited lower bound. witness, when present, is a dual vector of norm
    rho + 1.
    """

    def __init__(self, rho: int, exact: bool, witness: Optional[DualVector] = None):
        rho = _as_int(rho, "rho")
        if rho < 0:
            raise ValueError(f"rho must be nonnegative, got {rho}")
        if witness is not None and exact and witness.norm != rho + 1:
            raise ValueError(f"witness norm {witness.norm} must equal rho + 1 = {rho + 1}")
        self._rho = rho
        self._exact = bool(exact)
        self._witness = witness

    @property
    def rho(self) -> int:
        return self._rho

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def witness(self) -> Optional[DualVector]:
        return self._witness

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrigDegree):
            return NotImplemented
        return (self._rho, self._exact, self._witness) == (
            other._rho,
            other._exact,
            other._witness,
        )

    def __hash__(self) -> int:
        return hash((self._rho, self._exact, self._witness))

    def __repr__(self) -> str:
        return f"TrigDegree(rho={self._rho}, exact={self._exact}, witness={self._witness!r})"

    def serialize(self) -> Dict[str, Any]:
        return {
            "rho": self._rho,
            "exact": self._exact,
            "witness": self._witness.serialize() if self._witness is not None else None,
        }

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "TrigDegree":
        witness = data.get("witness")
        return cls(
            rho=data["rho"],
            exact=data["exact"],
            witness=DualVector.deserialize(witness) if witness is not None else None,
        )


# Module operations


def validate_rule(N: int, g: Iterable[int]) -> LatticeRule:
    """
    Validate (N, g) and return the corresponding rule.

    Raises:
        ModulusTooSmall: If N <= 1
        EmptyGenerator: If g is empty
        GeneratorOutOfRange: If some g_j is 0, negative or >= N
    """
    return LatticeRule(N, g)


def apply_unit(rule: LatticeRule, u: int) -> LatticeRule:
    """
    Multiply the generating vector by a unit of Z_N.

    The dual lattice is mapped onto itself by this operation, so every
    enumerator coefficient and the trigonometric degree are unchanged.

    Args:
        rule: Rule to transform
        u: Multiplier with gcd(u, N) = 1 and 1 <= u <= N - 1

    Returns:
        Rule with g_j replaced by (u * g_j) mod N

    Raises:
        NotAUnit: If u is out of range or shares a factor with N
    """
    u = _as_int(u, "u")
    if not is_unit(u, rule.N):
        raise NotAUnit(f"{u} is not a unit modulo {rule.N}")
    return LatticeRule(rule.N, [(u * g_j) % rule.N for g_j in rule.g])


def is_dual(rule: LatticeRule, k: Sequence[int]) -> bool:
    """True iff k . g = 0 (mod N). Python integers, so no overflow."""
    if len(k) != rule.s:
        raise ValueError(f"frequency has {len(k)} components, rule has s={rule.s}")
    return sum(int(k_j) * g_j for k_j, g_j in zip(k, rule.g)) % rule.N == 0


def monomial_rule_value(rule: LatticeRule, k: Sequence[int]) -> complex:
    """
    Apply the rule to the Fourier monomial x -> exp(2 pi i k . x).

    Evaluated as an actual quadrature over the lattice points. The character
    sum identity makes the result 1 for dual k and 0 otherwise, up to rounding.
    """
    frequency = numpy.asarray(k, dtype=numpy.float64)
    if frequency.shape != (rule.s,):
        raise ValueError(f"frequency has {frequency.size} components, rule has s={rule.s}")
    return complex(rule.integrate(lambda x: numpy.exp(2j * numpy.pi * (x @ frequency))))


def integrates_exactly(rule: LatticeRule, k: Sequence[int], atol: float = 1e-9) -> bool:
    """
    Whether the rule reproduces the exact integral of exp(2 pi i k . x).

    The exact integral over the unit cube is 1 for k = 0 and 0 otherwise.
    """
    exact = 1.0 if all(k_j == 0 for k_j in k) else 0.0
    return abs(monomial_rule_value(rule, k) - exact) <= atol
