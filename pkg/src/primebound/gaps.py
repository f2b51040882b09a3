"""Maximal prime gaps, Cramér ratios, and power-of-log gap bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _parallel
from .errors import DomainError, UndefinedResult
from .sieve import DEFAULT_SEGMENT_SIZE, PrimeTable, require_budget, segmented_primes

# below this start the asymptotic ratio statistics are meaningless (gap 4 at 7 has ratio > 1)
SMALL_PRIME_REGIME = 11


@dataclass(frozen=True)
class GapRecord:
    p: int
    p_next: int

    @property
    def gap(self) -> int:
        return self.p_next - self.p

    @property
    def merit(self) -> float:
        return self.gap / math.log(self.p)

    @property
    def cramer_ratio(self) -> float:
        return self.gap / math.log(self.p) ** 2

    @property
    def small_prime_regime(self) -> bool:
        return self.p < SMALL_PRIME_REGIME

    def as_row(self) -> tuple:
        return (self.p, self.p_next, self.gap, self.merit, self.cramer_ratio)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "p_next": self.p_next,
            "gap": self.gap,
            "merit": self.merit,
            "cramer_ratio": self.cramer_ratio,
            "small_prime_regime": self.small_prime_regime,
        }


@dataclass
class _ChunkScan:
    """Local gap summary of the primes in one sub-range."""

    first: int | None
    last: int | None
    candidates: list[tuple[int, int]]  # strict running-max gaps within the chunk
    largest: int


def _scan_chunk(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> _ChunkScan:
    first = last = None
    best = 0
    candidates: list[tuple[int, int]] = []
    for primes in segmented_primes(lo, hi, segment_size):
        if primes.size == 0:
            continue
        if last is not None:
            primes = np.concatenate(([last], primes))
        elif first is None:
            first = int(primes[0])
        if primes.size >= 2:
            gaps = np.diff(primes)
            prior = np.maximum.accumulate(np.concatenate(([best], gaps)))[:-1]
            for i in np.flatnonzero(gaps > prior).tolist():
                candidates.append((int(primes[i]), int(primes[i + 1])))
            best = max(best, int(gaps.max()))
        last = int(primes[-1])
    return _ChunkScan(first, last, candidates, best)


def _stitch(scans: list[_ChunkScan]) -> list[GapRecord]:
    """Join chunk summaries in order into the global record table."""
    records: list[GapRecord] = []
    best = 0
    prev_last: int | None = None
    for scan in scans:
        pairs = list(scan.candidates)
        if prev_last is not None and scan.first is not None:
            pairs.insert(0, (prev_last, scan.first))
        for p, q in pairs:
            if q - p > best:
                best = q - p
                records.append(GapRecord(p, q))
        if scan.last is not None:
            prev_last = scan.last
    return records


def maximal_gaps_up_to(N: int, threads: int = 1) -> list[GapRecord]:
    """All maximal-gap records between consecutive primes p < p_next <= N.

    Chunks are scanned independently (optionally in worker processes) and
    stitched in order across their boundaries.
    """
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    require_budget(N)
    jobs = _parallel.partition(2, N, max(1, threads), align=DEFAULT_SEGMENT_SIZE)
    return _stitch(_parallel.ordered_map(_scan_chunk, jobs, threads))


def max_gap(N: int, threads: int = 1) -> int:
    """Largest gap between consecutive primes up to N."""
    return maximal_gaps_up_to(N, threads)[-1].gap


def max_gap_linear(N: int, table: PrimeTable | None = None) -> int:
    """Same quantity as max_gap by one direct diff over a materialized prime list."""
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    if table is None:
        primes = np.concatenate(list(segmented_primes(2, N)))
    else:
        primes = table.primes_in(2, N)
    return int(np.diff(primes).max())


@dataclass(frozen=True)
class GapBoundResult:
    N: int
    r: float
    bound: float
    holds: bool
    worst: GapRecord

    @property
    def worst_score(self) -> float:
        return self.worst.gap / self.bound

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "bound": self.bound,
            "holds": self.holds,
            "worst": self.worst.to_dict(),
            "worst_score": self.worst_score,
        }


def verify_gap_bound(N: int, r: float, threads: int = 1) -> GapBoundResult:
    """Check every gap between consecutive primes up to N is below ln(N)**r."""
    if N < 11:
        raise DomainError(f"N must be >= 11 so that ln N > 1, got {N}")
    if r <= 0:
        raise DomainError(f"exponent must be positive, got {r}")
    bound = math.log(N) ** r
    # the bound is constant in p, so the first record with the largest gap is the worst
    worst = maximal_gaps_up_to(N, threads)[-1]
    return GapBoundResult(N, r, bound, worst.gap < bound, worst)


def gap_exponent(p: int, gap: int) -> float:
    """Exponent r with ln(p)**r == gap."""
    if p < 11:
        raise DomainError(f"p must be >= 11 so that ln ln p > 0 is safely away from 0, got {p}")
    if gap < 2:
        raise DomainError(f"gap must be >= 2, got {gap}")
    return math.log(gap) / math.log(math.log(p))


def selberg_ratio(x: int, lam: float, table: PrimeTable) -> float:
    """pi(x + Phi) - pi(x), scaled by ln x / Phi, with Phi = ln(x)**lam.

    The window is (x, x + floor(Phi)].
    """
    if x < 100:
        raise DomainError(f"x must be >= 100, got {x}")
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    phi = math.log(x) ** lam
    width = math.floor(phi)
    if width < 1:
        raise UndefinedResult(f"empty window: ln(x)^lambda = {phi:.4g} < 1")
    count = table.count_primes(x + 1, x + width)
    return count * math.log(x) / phi


@dataclass(frozen=True)
class SelbergSample:
    x: int
    ratio: float


def selberg_samples(lo: int, hi: int, count: int, lam: float, seed: int) -> list[SelbergSample]:
    """selberg_ratio at ``count`` points drawn log-uniformly from [lo, hi].

    Points come from the SplitMix64 stream seeded with ``seed``; each is
    evaluated on its own small table covering just its window.
    """
    from .cramer_model import uniform_block
    from .sieve import build_table

    if not 100 <= lo < hi:
        raise DomainError(f"need 100 <= lo < hi, got [{lo}, {hi}]")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    a, b = math.log(lo), math.log(hi)
    out = []
    for u in uniform_block(seed, 0, count).tolist():
        x = min(hi, max(lo, int(math.exp(a + u * (b - a)))))
        width = math.floor(math.log(x) ** lam)
        table = build_table(x + 1, x + max(width, 1))
        out.append(SelbergSample(x, selberg_ratio(x, lam, table)))
    return out
