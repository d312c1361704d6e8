"""
Exception hierarchy for latqd.

Every error raised on purpose by the library derives from LatticeError, which
is itself a ValueError so that callers validating inputs the usual way keep
working. The command line front end maps these classes onto exit codes.
"""


class LatticeError(ValueError):
    """Root of all latqd errors."""


# ─── Input validation ─────────────────────────────────────────────────────────


class ModulusTooSmall(LatticeError):
    """The modulus N must be at least 2."""


class GeneratorOutOfRange(LatticeError):
    """A generator component lies outside 1..N-1."""


class EmptyGenerator(LatticeError):
    """The generating vector has no components."""


class InvalidBoxRadius(LatticeError):
    """The box radius d must be a positive integer."""


class NotAUnit(LatticeError):
    """The multiplier is not an invertible residue modulo N."""


# ─── Engine failures ──────────────────────────────────────────────────────────


class BudgetExceeded(LatticeError):
    """
    The requested computation is larger than the configured budget.

    Signals the caller to choose a cheaper engine or smaller parameters; it is
    never a numerical failure.
    """


class ResidualTooLarge(LatticeError):
    """A floating point coefficient is farther than tol from any integer."""


class InvariantViolation(LatticeError):
    """
    A coefficient list breaks the structural invariants of a weight enumerator.

    Raised for negative counts, odd counts at a >= 1, or M(0) != 1. Unlike
    ResidualTooLarge this points at an engine bug rather than rounding noise.
    """


# ─── Search ───────────────────────────────────────────────────────────────────


class InvalidSearchSpec(LatticeError):
    """A search specification is missing or carries strategy-specific fields."""


class TrialsZero(InvalidSearchSpec):
    """Random search needs at least one trial."""


class NoValidCandidate(LatticeError):
    """Every candidate of a search space was rejected."""
