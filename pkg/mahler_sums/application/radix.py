"""Perfect-power structure of radices: r = d(r)^j with d(r) not a perfect power."""

import math
from functools import lru_cache
from typing import Optional

from mahler_sums.domain.entities import RadixDecomposition
from mahler_sums.domain.errors import OutOfDomain


def integer_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, by binary search verified with exact powers."""
    if n < 0 or k < 1:
        raise OutOfDomain(f"integer_root needs n >= 0 and k >= 1, got n={n}, k={k}")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    lo, hi = 1, 1 << ((n.bit_length() + k - 1) // k)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


@lru_cache(maxsize=64)
def _primes_upto(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _split(n: int) -> tuple[int, int]:
    """(d, j) with d^j = n and j maximal; prime exponents are peeled one at a time."""
    base, exponent = n, 1
    for p in _primes_upto(max(2, n.bit_length())):
        while True:
            root = integer_root(base, p)
            if root < 2 or root**p != base:
                break
            base, exponent = root, exponent * p
    return base, exponent


def is_perfect_power(n: int) -> Optional[tuple[int, int]]:
    """Representation n = a^m with maximal m >= 2, or None."""
    if n < 2:
        raise OutOfDomain(f"is_perfect_power needs n >= 2, got {n}")
    base, exponent = _split(n)
    if exponent == 1:
        return None
    return base, exponent


def decompose(r: int) -> RadixDecomposition:
    """Unique r = d^j with d not a perfect power."""
    if r < 2:
        raise OutOfDomain(f"decompose needs r >= 2, got {r}")
    base, exponent = _split(r)
    return RadixDecomposition(d=base, j=exponent)


def group_by_base(radices: list[int]) -> dict[int, list[int]]:
    """Group radices sharing d(r); values for different groups are treated independently."""
    groups: dict[int, list[int]] = {}
    for r in radices:
        groups.setdefault(decompose(r).d, []).append(r)
    return groups
