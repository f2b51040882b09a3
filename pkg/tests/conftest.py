"""Independent oracles shared by the test modules.

Nothing here imports the sieve: primality comes from trial division only.
"""

import math

import numpy as np
import pytest

from primebound.sieve import build_table


def is_prime_td(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def trial_division_flags(limit: int) -> np.ndarray:
    """flags[n] is True iff n is prime, for 0 <= n <= limit, by vectorized trial division."""
    ns = np.arange(limit + 1, dtype=np.int64)
    flags = ns >= 2
    for d in range(2, math.isqrt(limit) + 1):
        if is_prime_td(d):
            flags &= (ns % d != 0) | (ns == d)
    return flags


def brute_min_p(n: int) -> int | None:
    for p in range(2, n // 2 + 1):
        if is_prime_td(p) and is_prime_td(n - p):
            return p
    return None


def brute_ternary(n: int) -> tuple[int, int, int] | None:
    for a in range(2, n // 3 + 1):
        if not is_prime_td(a):
            continue
        for b in range(a, (n - a) // 2 + 1):
            if is_prime_td(b) and is_prime_td(n - a - b):
                return a, b, n - a - b
    return None


@pytest.fixture(scope="session")
def table_1e6():
    return build_table(0, 1_010_010)


@pytest.fixture(scope="session")
def td_flags_1e6():
    return trial_division_flags(1_000_000)
