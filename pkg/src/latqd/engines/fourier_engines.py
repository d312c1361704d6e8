"""
Character sum engines.

Replacing the congruence k . g = 0 (mod N) by the average of
exp(2 pi i n k . g / N) over n turns the box sum into

    W(z) = (1/N) sum_n prod_j (1 + sum_{a=1..d} z^a 2 cos(2 pi n a g_j / N)),

because the k and -k terms of each inner sum are complex conjugates. Three
computations are built on it:

- charsum multiplies the s per-node factor polynomials for every node and
  averages the products, giving all coefficients in real arithmetic.
- evaluate_W_at evaluates the right-hand side at one numeric z.
- fft_enumerator samples W at L-th roots of unity, L a power of two above the
  degree d*s, and recovers the coefficients with an inverse radix-2 FFT.

Cosine arguments are reduced as 2 pi ((n a g_j mod N) / N) with the product
formed in 64-bit integers, so the argument never grows with N or d. The node
loop is chunked and reduced by engines.reduction, which keeps results
independent of the thread count.
"""

import logging
from typing import Optional, Sequence, Tuple, Union

import numpy

from ..config import DEFAULT_CONFIG, EngineConfig
from ..lattice.enumerator import FloatEnumerator
from ..lattice.errors import BudgetExceeded
from ..lattice.rule import BoxRadius, LatticeRule
from ..utilities import next_power_of_two
from .abstract_engines import AbstractEnumeratorEngine
from .reduction import sum_chunks

logger = logging.getLogger(__name__)

# n * g_j and (n g_j mod N) * a must stay inside int64.
_MAX_MODULUS = 2**31


class PerNodeFactor:
    """
    Real factor polynomial of one coordinate at one node.

    factor_coeffs is [1, 2 cos(2 pi n g_j / N), ..., 2 cos(2 pi n d g_j / N)],
    the inner sum sum_{k=-d..d} z^|k| exp(2 pi i n k g_j / N) collected by
    powers of z.
    """

    def __init__(self, n: int, j: int, factor_coeffs: Sequence[float]):
        self.n = n
        self.j = j
        self.factor_coeffs = numpy.asarray(factor_coeffs, dtype=numpy.float64)

    @classmethod
    def for_node(
        cls, rule: LatticeRule, d: Union[int, BoxRadius], n: int, j: int
    ) -> "PerNodeFactor":
        """Build the factor of coordinate j at node n."""
        d = BoxRadius.coerce(d)
        if not 0 <= n < rule.N:
            raise ValueError(f"node index {n} outside 0..{rule.N - 1}")
        table = node_factor_table(rule, d.d, n, n + 1)
        return cls(n, j, table[0, j])

    def __repr__(self) -> str:
        return f"PerNodeFactor(n={self.n}, j={self.j}, factor_coeffs={self.factor_coeffs.tolist()})"


def _check_modulus(rule: LatticeRule, d: int) -> None:
    if rule.N > _MAX_MODULUS or rule.N * d >= 2**62:
        raise BudgetExceeded(f"N={rule.N} with d={d} is too large for 64-bit phase arithmetic")


def node_factor_table(rule: LatticeRule, d: int, start: int, stop: int) -> numpy.ndarray:
    """
    Per-node factor coefficients for nodes start..stop-1.

    Returns:
        Array of shape (stop - start, s, d + 1); entry [n, j, 0] is 1 and
        entry [n, j, a] is 2 cos(2 pi ((n a g_j) mod N) / N)
    """
    n = numpy.arange(start, stop, dtype=numpy.int64)[:, None]
    g = numpy.asarray(rule.g, dtype=numpy.int64)[None, :]
    phase = (n * g) % rule.N
    table = numpy.empty((stop - start, rule.s, d + 1), dtype=numpy.float64)
    table[:, :, 0] = 1.0
    for a in range(1, d + 1):
        reduced = (phase * a) % rule.N
        table[:, :, a] = 2.0 * numpy.cos(2.0 * numpy.pi * (reduced / rule.N))
    return table


def _product_rows(rule: LatticeRule, d: int, start: int, stop: int) -> numpy.ndarray:
    """Coefficients of prod_j factor_j(z) for each node, shape (rows, ds + 1)."""
    factors = node_factor_table(rule, d, start, stop)
    product = numpy.ones((stop - start, 1), dtype=numpy.float64)
    for j in range(rule.s):
        degree = product.shape[1] - 1
        extended = numpy.zeros((stop - start, degree + d + 1), dtype=numpy.float64)
        for b in range(d + 1):
            extended[:, b : b + degree + 1] += product * factors[:, j, b : b + 1]
        product = extended
    return product


def _sample_rows(
    rule: LatticeRule, d: int, zs: numpy.ndarray, start: int, stop: int
) -> numpy.ndarray:
    """
    Per-node values prod_j (1 + sum_a z^a 2 cos(...)) for each sample z.

    Powers of z are updated incrementally, O(d) work per (node, coordinate,
    sample).

    Returns:
        Complex array of shape (rows, len(zs))
    """
    factors = node_factor_table(rule, d, start, stop)
    values = numpy.ones((stop - start, zs.size), dtype=numpy.complex128)
    for j in range(rule.s):
        inner = numpy.ones((stop - start, zs.size), dtype=numpy.complex128)
        power = numpy.ones(zs.size, dtype=numpy.complex128)
        for a in range(1, d + 1):
            power = power * zs
            inner += factors[:, j, a : a + 1] * power[None, :]
        values *= inner
    return values


def _sample_W(
    rule: LatticeRule, d: int, zs: numpy.ndarray, config: EngineConfig
) -> numpy.ndarray:
    """W at every sample point, averaged over nodes with the fixed reduction tree."""
    _check_modulus(rule, d)
    total = sum_chunks(
        rule.N,
        config.chunk_rows,
        config.resolved_threads(),
        lambda start, stop: _sample_rows(rule, d, zs, start, stop),
    )
    return total / rule.N


def radix2_fft(values: Sequence[complex], inverse: bool = False) -> numpy.ndarray:
    """
    Radix-2 decimation-in-time FFT.

    Uses numpy's sign and scaling conventions: the forward transform has
    exp(-2 pi i m a / L) and no scaling, the inverse has exp(+2 pi i m a / L)
    and divides by L.

    Args:
        values: Sequence whose length is a power of two
        inverse: Compute the inverse transform

    Returns:
        Complex array of the same length

    Raises:
        ValueError: If the length is not a power of two
    """
    data = numpy.asarray(values, dtype=numpy.complex128)
    length = data.shape[0]
    if length < 1 or length & (length - 1):
        raise ValueError(f"radix-2 FFT needs a power-of-two length, got {length}")
    sign = 1.0 if inverse else -1.0

    def transform(block: numpy.ndarray) -> numpy.ndarray:
        size = block.shape[0]
        if size == 1:
            return block.copy()
        even = transform(block[0::2])
        odd = transform(block[1::2])
        twiddled = numpy.exp(sign * 2j * numpy.pi * numpy.arange(size // 2) / size) * odd
        return numpy.concatenate([even + twiddled, even - twiddled])

    result = transform(data)
    return result / length if inverse else result


def fft_sample_points(degree: int) -> Tuple[int, numpy.ndarray]:
    """
    Transform length and the sample points needed to recover a polynomial.

    Args:
        degree: Polynomial degree (d*s)

    Returns:
        (L, zs) with L the smallest power of two >= degree + 1 and
        zs[m] = exp(-2 pi i m / L) for m = 0..L/2; the remaining samples
        follow by conjugate symmetry
    """
    length = next_power_of_two(degree + 1)
    m = numpy.arange(length // 2 + 1)
    return length, numpy.exp(-2j * numpy.pi * m / length)


class CharSumEngine(AbstractEnumeratorEngine):
    """
    Full polynomial character sum.

    For every node the s factor polynomials of degree d are multiplied
    without truncation into a degree ds polynomial; the products are averaged
    over nodes. Cost is linear in N and quadratic in d*s per node.
    """

    name = "charsum"
    exact = False

    def enumerate_coefficients(self, rule: LatticeRule, d: BoxRadius) -> FloatEnumerator:
        _check_modulus(rule, d.d)
        total = sum_chunks(
            rule.N,
            self.config.chunk_rows,
            self.config.resolved_threads(),
            lambda start, stop: _product_rows(rule, d.d, start, stop),
        )
        return FloatEnumerator(rule, d, total / rule.N)


class FFTEngine(AbstractEnumeratorEngine):
    """
    Coefficient recovery from samples at roots of unity.

    W has degree ds, so its values at the L-th roots of unity with L >= ds + 1
    determine it. Bins ds + 1..L - 1 of the inverse transform must vanish and
    are reported as padding, doubling as an error monitor.
    """

    name = "fft"
    exact = False

    def enumerate_coefficients(self, rule: LatticeRule, d: BoxRadius) -> FloatEnumerator:
        degree = d.d * rule.s
        length, zs = fft_sample_points(degree)
        half = _sample_W(rule, d.d, zs, self.config)
        samples = numpy.empty(length, dtype=numpy.complex128)
        samples[: length // 2 + 1] = half
        # Real coefficients: W(conj z) = conj W(z).
        samples[length // 2 + 1 :] = numpy.conj(half[1 : length - length // 2][::-1])
        recovered = radix2_fft(samples, inverse=True)
        logger.debug("fft length %d for degree %d", length, degree)
        return FloatEnumerator(
            rule,
            d,
            recovered[: degree + 1].real,
            padding=numpy.abs(recovered[degree + 1 :]),
        )


def charsum(
    rule: LatticeRule, d: Union[int, BoxRadius], config: Optional[EngineConfig] = None
) -> FloatEnumerator:
    """Real coefficients of W by the per-node polynomial product (unrounded)."""
    return CharSumEngine(config).compute_raw(rule, d)


def fft_enumerator(
    rule: LatticeRule, d: Union[int, BoxRadius], config: Optional[EngineConfig] = None
) -> FloatEnumerator:
    """Real coefficients of W recovered by inverse FFT (unrounded)."""
    return FFTEngine(config).compute_raw(rule, d)


def evaluate_W_at(
    rule: LatticeRule,
    d: Union[int, BoxRadius],
    z: complex,
    config: Optional[EngineConfig] = None,
) -> complex:
    """
    Evaluate W(z) from the character sum without forming coefficients.

    O(N d s) scalar operations.

    Args:
        rule: Rule to analyse
        d: Box radius
        z: Evaluation point
        config: Parallelism settings; None selects the defaults

    Returns:
        W(z) as a complex number
    """
    d = BoxRadius.coerce(d)
    config = config if config is not None else DEFAULT_CONFIG
    zs = numpy.asarray([z], dtype=numpy.complex128)
    return complex(_sample_W(rule, d.d, zs, config)[0])
