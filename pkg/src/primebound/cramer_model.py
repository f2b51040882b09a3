"""Cramér's random model and the sieved-density comparison.

Random draws come from SplitMix64 so runs are reproducible across
implementations: trial t uses the stream seeded with ``seed + t`` and the
k-th draw (k = 0, 1, ...) decides whether ``x_start + k`` is included.
A draw is turned into a double in [0, 1) from its top 53 bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _parallel
from .errors import DomainError, UndefinedResult
from .sieve import PrimeTable

EULER_GAMMA = 0.57721566490153286
MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
_DRAW_CHUNK = 1 << 20


class SplitMix64:
    """Reference scalar SplitMix64 (Steele, Lea, Flood)."""

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


def splitmix64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Draws start, ..., start+count-1 of the stream seeded with ``seed``, vectorized."""
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + k * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    return (splitmix64_block(seed, start, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class SimConfig:
    x_start: int
    x_end: int
    seed: int
    trials: int = 1

    def __post_init__(self) -> None:
        if self.x_start < 3:
            raise DomainError(f"x_start must be >= 3, got {self.x_start}")
        if self.x_end < self.x_start:
            raise DomainError(f"x_end must be >= x_start, got [{self.x_start}, {self.x_end}]")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class SimOutcome:
    """Statistics of one random pseudo-prime set.

    max_gap, max_gap_at and ratio are None when fewer than two integers were drawn.
    """

    trial: int
    pseudo_prime_count: int
    max_gap: int | None
    max_gap_at: int | None
    ratio: float | None

    def as_row(self) -> tuple:
        return (self.trial, self.pseudo_prime_count, self.max_gap, self.max_gap_at, self.ratio)


def inclusion_probability(n: int | np.ndarray) -> float | np.ndarray:
    """Chance 1/ln n that n is included in the random model."""
    if isinstance(n, np.ndarray):
        return 1.0 / np.log(n.astype(np.float64))
    return 1.0 / math.log(n)


def run_trial(x_start: int, x_end: int, seed: int, trial: int) -> SimOutcome:
    stream_seed = (seed + trial) & MASK64
    count = 0
    last: int | None = None
    best: int | None = None
    best_at: int | None = None
    total = x_end - x_start + 1
    for off in range(0, total, _DRAW_CHUNK):
        size = min(_DRAW_CHUNK, total - off)
        ns = np.arange(x_start + off, x_start + off + size, dtype=np.int64)
        chosen = ns[uniform_block(stream_seed, off, size) < inclusion_probability(ns)]
        if chosen.size == 0:
            continue
        count += chosen.size
        if last is not None:
            chosen = np.concatenate(([last], chosen))
        if chosen.size >= 2:
            gaps = np.diff(chosen)
            i = int(np.argmax(gaps))
            if best is None or gaps[i] > best:
                best, best_at = int(gaps[i]), int(chosen[i])
        last = int(chosen[-1])
    ratio = None if best is None else best / math.log(x_end) ** 2
    return SimOutcome(trial, count, best, best_at, ratio)


def simulate(config: SimConfig, threads: int = 1) -> list[SimOutcome]:
    """One outcome per trial; identical config gives bit-identical outcomes."""
    jobs = [(config.x_start, config.x_end, config.seed, t) for t in range(config.trials)]
    return _parallel.ordered_map(run_trial, jobs, threads)


def expected_count(x_start: int, x_end: int) -> float:
    """Sum of 1/ln n over [x_start, x_end], the model's expected set size."""
    total = 0.0
    for a in range(x_start, x_end + 1, _DRAW_CHUNK):
        b = min(x_end, a + _DRAW_CHUNK - 1)
        total += float(np.sum(1.0 / np.log(np.arange(a, b + 1, dtype=np.float64))))
    return total


def mertens_product(z: int, table: PrimeTable) -> float:
    """Product of (1 - 1/s) over primes s <= z, summed in log space in ascending order."""
    if z < 2:
        raise DomainError(f"z must be >= 2, got {z}")
    if table.lo > 2:
        raise DomainError(f"table must start at or below 2, starts at {table.lo}")
    primes = table.primes_in(2, z).astype(np.float64)
    return math.exp(math.fsum(np.log1p(-1.0 / primes).tolist()))


@dataclass(frozen=True)
class SievedDensity:
    n: float
    z: int
    mertens: float
    density: float


def sieved_density(n: float, z: int, table: PrimeTable) -> SievedDensity:
    """1 / (mertens_product(z) * ln n): primality chance of n given no prime factor <= z."""
    if n <= 1:
        raise DomainError(f"n must exceed 1, got {n}")
    m = mertens_product(z, table)
    return SievedDensity(n, z, m, 1.0 / (m * math.log(n)))


def interval_survivors(x: int, y: int, q: int, table: PrimeTable) -> int:
    """Integers in (x, x + y] left after crossing out multiples of primes s <= q.

    Crossing starts at max(s*s, first multiple), as in Eratosthenes, so
    primes s themselves are kept.
    """
    lo, hi = x + 1, x + y
    alive = np.ones(y, dtype=bool)
    ps = table.primes_in(2, min(q, math.isqrt(hi))).astype(np.int64) if q >= 2 else np.empty(0)
    if ps.size:
        first = np.maximum(ps * ps, -(-lo // ps) * ps)
        for f, s in zip((first - lo).tolist(), ps.tolist()):
            if f < y:
                alive[f::s] = False
    # primes s <= q above sqrt(hi) only strike themselves, which the s*s start skips
    return int(alive.sum())


def empirical_F(x: int, y: int, q: int, table: PrimeTable) -> float:
    """Estimate F(n, q) on (x, x + y]: (primes / survivors) * ln(x + y/2).

    Once q >= sqrt(x + y) the survivors are exactly the primes and the
    estimate is ln(x + y/2) on the nose.
    """
    if not x > y > 0:
        raise DomainError(f"need x > y > 0, got x={x}, y={y}")
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    primes = table.count_primes(x + 1, x + y)
    survivors = interval_survivors(x, y, q, table)
    if survivors == 0:
        raise UndefinedResult(f"no survivors in ({x}, {x + y}] after sieving by primes <= {q}")
    return primes / survivors * math.log(x + y / 2)


@dataclass(frozen=True)
class MaierDiscrepancy:
    n: int
    p: int
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs


def maier_discrepancy(n: int, table: PrimeTable) -> MaierDiscrepancy:
    """Compare 1 / prod_{s <= p}(1 - 1/s), p the largest prime <= sqrt(n), with ln n.

    By Mertens' third theorem the ratio tends to e^gamma / 2, not 1.
    """
    if n < 9:
        raise DomainError(f"n must be >= 9, got {n}")
    p = table.prev_prime(math.isqrt(n))
    return MaierDiscrepancy(n, p, 1.0 / mertens_product(p, table), math.log(n))
