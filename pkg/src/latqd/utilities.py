"""Centralized integer helpers shared by the lattice, engine and search packages."""

import math
from typing import Tuple


def is_unit(u: int, modulus: int) -> bool:
    """
    Determine whether u is an invertible residue modulo the given modulus.

    Args:
        u: Candidate multiplier, expected in 1..modulus-1
        modulus: The lattice modulus N

    Returns:
        True if 1 <= u <= modulus - 1 and gcd(u, modulus) == 1
    """
    return 1 <= u <= modulus - 1 and math.gcd(u, modulus) == 1


def units(modulus: int) -> Tuple[int, ...]:
    """All invertible residues modulo the given modulus, ascending."""
    return tuple(u for u in range(1, modulus) if math.gcd(u, modulus) == 1)


def next_power_of_two(n: int) -> int:
    """Smallest power of two that is >= n (and >= 1)."""
    if n <= 1:
        return 1
    return 1 << (n - 1).bit_length()


def box_size(d: int, s: int) -> int:
    """Number of integer points in the box {-d..d}^s."""
    return (2 * d + 1) ** s


def korobov_vector(a: int, modulus: int, s: int) -> Tuple[int, ...]:
    """
    Korobov generating vector (1, a, a^2, ..., a^(s-1)) reduced mod N.

    Components are not validated here; a component may come out as 0 for
    composite moduli, which callers must reject.

    Args:
        a: Korobov parameter
        modulus: The lattice modulus N
        s: Dimension

    Returns:
        Tuple of s residues
    """
    components = []
    power = 1 % modulus
    for _ in range(s):
        components.append(power)
        power = (power * a) % modulus
    return tuple(components)
