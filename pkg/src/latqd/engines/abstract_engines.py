"""
Abstract enumerator engine.

Engines compute the weight enumerator of a rule for a box radius d. The
abstract class owns the shared orchestration (input coercion, the 63-bit box
check, rounding of floating point results, logging) and delegates the actual
computation to the enumerate_coefficients hook. Concrete engines are
registered by name on subclass creation, so the command line can dispatch on
the engine name.
"""

import logging
from abc import ABC, abstractmethod
from typing import ClassVar, Dict, Optional, Tuple, Union

from ..config import DEFAULT_CONFIG, EngineConfig
from ..lattice.enumerator import (
    FloatEnumerator,
    WeightEnumerator,
    check_box_fits,
    round_coeffs,
)
from ..lattice.rule import BoxRadius, LatticeRule

logger = logging.getLogger(__name__)


class AbstractEnumeratorEngine(ABC):
    """
    Root engine class.

    Subclasses set the class attribute `name` and implement
    enumerate_coefficients. Exact engines return a WeightEnumerator; floating
    point engines set `exact = False` and return a FloatEnumerator, which
    apply_engine rounds.

    Stateless apart from its configuration.
    """

    name: ClassVar[str] = ""
    exact: ClassVar[bool] = True
    _registry: ClassVar[Dict[str, type]] = {}

    def __init_subclass__(cls, **kwargs):
        """Register concrete engines under their name."""
        super().__init_subclass__(**kwargs)
        if cls.name:
            if cls.name in AbstractEnumeratorEngine._registry:
                raise ValueError(f"engine name {cls.name!r} registered twice")
            AbstractEnumeratorEngine._registry[cls.name] = cls

    def __init__(self, config: Optional[EngineConfig] = None):
        """
        Args:
            config: Budgets and parallelism; None selects the defaults
        """
        self.config = config if config is not None else DEFAULT_CONFIG

    def apply_engine(
        self,
        rule: LatticeRule,
        d: Union[int, BoxRadius],
        tol: Optional[float] = None,
    ) -> WeightEnumerator:
        """
        Compute the exact weight enumerator.

        Args:
            rule: Rule to analyse
            d: Box radius
            tol: Rounding tolerance for floating point engines; None selects
                the coefficient-scale-aware default. Ignored by exact engines.

        Returns:
            Exact integer enumerator

        Raises:
            BudgetExceeded: If the computation exceeds the configured budget
            ResidualTooLarge: If floating point output cannot be rounded
            InvariantViolation: If the output breaks an enumerator invariant
        """
        d = BoxRadius.coerce(d)
        result = self.compute_raw(rule, d)
        if not self.exact:
            logger.debug("%s residual %.3e for %r, d=%d", self.name, result.max_residual, rule, d.d)
            return round_coeffs(result, tol)
        return result

    def compute_raw(
        self, rule: LatticeRule, d: Union[int, BoxRadius]
    ) -> Union[WeightEnumerator, FloatEnumerator]:
        """Run the engine without rounding, after the shared validation."""
        d = BoxRadius.coerce(d)
        check_box_fits(d, rule.s)
        logger.debug("engine %s on %r with d=%d", self.name, rule, d.d)
        return self.enumerate_coefficients(rule, d)

    @abstractmethod
    def enumerate_coefficients(
        self, rule: LatticeRule, d: BoxRadius
    ) -> Union[WeightEnumerator, FloatEnumerator]:
        """
        Hook computing the enumerator.

        Args:
            rule: Rule to analyse
            d: Validated box radius whose box fits 63-bit coefficients

        Returns:
            WeightEnumerator for exact engines, FloatEnumerator otherwise
        """
        ...


def available_engines() -> Tuple[str, ...]:
    """Names of all registered engines, in registration order."""
    return tuple(AbstractEnumeratorEngine._registry)


def get_engine(name: str, config: Optional[EngineConfig] = None) -> AbstractEnumeratorEngine:
    """
    Instantiate a registered engine by name.

    Raises:
        KeyError: If no engine has that name
    """
    try:
        engine_class = AbstractEnumeratorEngine._registry[name]
    except KeyError:
        raise KeyError(f"unknown engine {name!r}; available: {available_engines()}") from None
    return engine_class(config)
