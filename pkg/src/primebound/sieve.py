"""Segmented odd-only sieve of Eratosthenes and a compact prime table.

Only odd integers are stored, one bit each; 2 is handled as a special case.
Segments are sieved independently by the odd base primes up to sqrt(hi),
so the resulting table does not depend on the segment size.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, Iterator

import numpy as np

from .errors import CapacityError, DomainError, OutOfRangeError

MEMORY_CAP_ENV = "PRIMEBOUND_MEMORY_CAP"
DEFAULT_MEMORY_CAP = 1 << 30
DEFAULT_SEGMENT_SIZE = 1 << 20
# int64 arithmetic throughout; p*p for base primes must not overflow
MAX_VALUE = (1 << 63) - 1


def memory_cap() -> int:
    """Sieve memory budget in bytes, read from ``PRIMEBOUND_MEMORY_CAP``."""
    raw = os.environ.get(MEMORY_CAP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MEMORY_CAP
    try:
        cap = int(float(raw)) if any(c in raw for c in ".eE") else int(raw)
    except ValueError:
        raise DomainError(f"{MEMORY_CAP_ENV}={raw!r} is not a byte count") from None
    if cap <= 0:
        raise DomainError(f"{MEMORY_CAP_ENV} must be positive, got {cap}")
    return cap


@lru_cache(maxsize=16)
def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit from a monolithic odd-only sieve."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    odd = np.ones((limit + 1) // 2, dtype=bool)  # odd[i] <-> 2i+1
    odd[0] = False
    for i in range(1, (math.isqrt(limit) + 1) // 2 + 1):
        if i < odd.size and odd[i]:
            p = 2 * i + 1
            odd[p * p // 2 :: p] = False
    primes = 2 * np.flatnonzero(odd).astype(np.int64) + 1
    out = np.concatenate(([2], primes)).astype(np.int64)
    out.flags.writeable = False
    return out


def _check_bounds(lo: int, hi: int) -> None:
    if lo < 0:
        raise DomainError(f"lower bound must be >= 0, got {lo}")
    if lo > hi:
        raise DomainError(f"empty range [{lo}, {hi}]")
    if hi > MAX_VALUE:
        raise CapacityError(f"upper bound {hi} exceeds 2^63 - 1")


def _check_segment_size(segment_size: int) -> None:
    if segment_size < 16 or segment_size % 16:
        raise DomainError(f"segment size must be a positive multiple of 16, got {segment_size}")


def _base_primes(hi: int) -> np.ndarray:
    return small_primes(math.isqrt(hi))[1:]


def streaming_budget(hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> int:
    """Bytes needed to stream primes up to hi: base primes plus one segment."""
    base_count = _prime_count_upper(math.isqrt(hi))
    return 8 * base_count + segment_size // 2 + 8 * _prime_count_upper(segment_size)


def _prime_count_upper(x: int) -> int:
    # Rosser–Schoenfeld style bound, only used for budgeting
    if x < 17:
        return 6
    return int(1.26 * x / math.log(x)) + 1


def require_budget(hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> None:
    """Raise CapacityError if streaming up to hi would exceed the memory cap."""
    if hi > MAX_VALUE:
        raise CapacityError(f"upper bound {hi} exceeds 2^63 - 1")
    need = streaming_budget(hi, segment_size)
    cap = memory_cap()
    if need > cap:
        raise CapacityError(f"sieving up to {hi} needs ~{need} bytes, cap is {cap}")


def _sieve_odds(start: int, count: int, base: np.ndarray) -> np.ndarray:
    """Primality flags for the odd integers start, start+2, ..., start+2(count-1)."""
    flags = np.ones(count, dtype=bool)
    if count == 0:
        return flags
    end = start + 2 * (count - 1)
    ps = base[: np.searchsorted(base, math.isqrt(end), side="right")]
    if ps.size:
        first = np.maximum(ps * ps, -(-start // ps) * ps)
        first += ps * (first % 2 == 0)
        offsets = (first - start) // 2
        for off, p in zip(offsets.tolist(), ps.tolist()):
            flags[off::p] = False
    if start == 1:
        flags[0] = False
    return flags


def _odd_span(lo: int, hi: int) -> tuple[int, int]:
    """First odd >= lo and the number of odds in [lo, hi]."""
    first = lo | 1
    count = 0 if first > hi else (hi - first) // 2 + 1
    return first, count


def _odd_segments(lo: int, hi: int, segment_size: int) -> Iterator[tuple[int, np.ndarray]]:
    base = _base_primes(hi)
    first, count = _odd_span(lo, hi)
    step = segment_size // 2
    for i in range(0, count, step):
        n = min(step, count - i)
        start = first + 2 * i
        yield start, _sieve_odds(start, n, base)


def sieve_window(lo: int, hi: int) -> tuple[int, np.ndarray]:
    """Return (first odd >= lo, primality flags for every odd in [lo, hi]).

    Unpacked working form for vectorized consumers; does not check the budget.
    """
    _check_bounds(lo, hi)
    first, count = _odd_span(lo, hi)
    return first, _sieve_odds(first, count, _base_primes(hi))


def segmented_primes(
    lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE
) -> Iterator[np.ndarray]:
    """Yield ascending int64 arrays of the primes in [lo, hi], one per segment.

    Nothing beyond a single segment is held in memory.
    """
    _check_bounds(lo, hi)
    _check_segment_size(segment_size)
    require_budget(hi, segment_size)
    two = lo <= 2 <= hi
    for start, flags in _odd_segments(lo, hi, segment_size):
        primes = start + 2 * np.flatnonzero(flags).astype(np.int64)
        if two:
            primes = np.concatenate(([2], primes)).astype(np.int64)
            two = False
        yield primes
    if two:
        yield np.array([2], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Primality of every integer in [lo, hi], one bit per odd integer.

    The table is immutable once built and safe to share between readers.
    Queries outside [lo, hi] raise OutOfRangeError, except that 0 and 1
    are always reported non-prime.
    """

    lo: int
    hi: int
    bits: np.ndarray = field(repr=False)

    @property
    def odd_base(self) -> int:
        return self.lo | 1

    @property
    def odd_count(self) -> int:
        return _odd_span(self.lo, self.hi)[1]

    def _check(self, a: int, b: int | None = None) -> None:
        b = a if b is None else b
        if a > b:
            raise DomainError(f"empty query range [{a}, {b}]")
        if a < self.lo or b > self.hi:
            raise OutOfRangeError(f"[{a}, {b}] not inside table range [{self.lo}, {self.hi}]")

    def _bit(self, i: int) -> bool:
        return bool((int(self.bits[i >> 3]) >> (i & 7)) & 1)

    def is_prime(self, n: int) -> bool:
        if n in (0, 1):
            return False
        self._check(n)
        if n % 2 == 0:
            return n == 2
        return self._bit((n - self.odd_base) // 2)

    def is_prime_many(self, values: np.ndarray) -> np.ndarray:
        """Vectorized is_prime over an integer array."""
        values = np.asarray(values, dtype=np.int64)
        if values.size == 0:
            return np.zeros(0, dtype=bool)
        small = values < 2
        inner = values[~small]
        if inner.size and (inner.min() < self.lo or inner.max() > self.hi):
            raise OutOfRangeError(f"values outside table range [{self.lo}, {self.hi}]")
        out = np.zeros(values.shape, dtype=bool)
        odd = (values & 1).astype(bool) & ~small
        idx = (values[odd] - self.odd_base) // 2
        out[odd] = ((self.bits[idx >> 3] >> (idx & 7).astype(np.uint8)) & 1).astype(bool)
        out[values == 2] = True
        return out

    def odd_flags(self, a: int, b: int) -> tuple[int, np.ndarray]:
        """Return (first odd >= a, flags for every odd integer in [a, b])."""
        self._check(a, b)
        first, count = _odd_span(a, b)
        if count == 0:
            return first, np.zeros(0, dtype=bool)
        i0 = (first - self.odd_base) // 2
        i1 = i0 + count - 1
        chunk = np.unpackbits(self.bits[i0 >> 3 : (i1 >> 3) + 1], bitorder="little")
        start = i0 & 7
        return first, chunk[start : start + count].astype(bool)

    def primes_in(self, a: int, b: int) -> np.ndarray:
        """Ascending array of exactly the primes in [a, b]."""
        first, flags = self.odd_flags(a, b)
        primes = first + 2 * np.flatnonzero(flags).astype(np.int64)
        if a <= 2 <= b:
            primes = np.concatenate(([2], primes)).astype(np.int64)
        return primes

    def primes(self) -> np.ndarray:
        return self.primes_in(self.lo, self.hi)

    def count_primes(self, a: int, b: int) -> int:
        self._check(a, b)
        total = 1 if a <= 2 <= b else 0
        first, count = _odd_span(a, b)
        if count == 0:
            return total
        i0 = (first - self.odd_base) // 2
        i1 = i0 + count - 1
        b0, b1 = i0 >> 3, i1 >> 3
        head = np.unpackbits(self.bits[b0 : b0 + 1], bitorder="little")
        if b0 == b1:
            return total + int(head[i0 & 7 : (i1 & 7) + 1].sum())
        tail = np.unpackbits(self.bits[b1 : b1 + 1], bitorder="little")
        total += int(head[i0 & 7 :].sum()) + int(tail[: (i1 & 7) + 1].sum())
        return total + int(np.bitwise_count(self.bits[b0 + 1 : b1]).sum())

    def prev_prime(self, n: int) -> int:
        """Largest prime <= n within the table."""
        if n < 2:
            raise DomainError(f"no prime <= {n}")
        self._check(n)
        a, window = n, 4096
        while True:
            a = max(self.lo, a - window)
            first, flags = self.odd_flags(a, n)
            hit = np.flatnonzero(flags)
            if hit.size:
                return first + 2 * int(hit[-1])
            if a == self.lo:
                break
            window *= 2
        if self.lo <= 2 <= n:
            return 2
        raise OutOfRangeError(f"no prime in [{self.lo}, {n}]")

    def next_prime(self, n: int) -> int:
        """Smallest prime >= n within the table."""
        if n <= 2 and self.lo <= 2 <= self.hi:
            return 2
        n = max(n, 3)
        self._check(n)
        b, window = n, 4096
        while True:
            b = min(self.hi, b + window)
            first, flags = self.odd_flags(n, b)
            hit = np.flatnonzero(flags)
            if hit.size:
                return first + 2 * int(hit[0])
            if b == self.hi:
                break
            window *= 2
        raise OutOfRangeError(f"no prime in [{n}, {self.hi}]")

    def dump(self, stream: IO[str]) -> None:
        """Write the table's primes as newline-separated decimals."""
        for p in self.primes().tolist():
            stream.write(f"{p}\n")


def build_table(
    lo: int,
    hi: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    cap: int | None = None,
) -> PrimeTable:
    """Sieve [lo, hi] into a PrimeTable.

    Raises CapacityError when the packed table plus working memory would
    exceed ``cap`` bytes (default: the ``PRIMEBOUND_MEMORY_CAP`` budget).
    """
    _check_bounds(lo, hi)
    _check_segment_size(segment_size)
    first, count = _odd_span(lo, hi)
    nbytes = (count + 7) // 8
    cap = memory_cap() if cap is None else cap
    need = nbytes + streaming_budget(hi, segment_size)
    if need > cap:
        raise CapacityError(f"table [{lo}, {hi}] needs ~{need} bytes, cap is {cap}")
    bits = np.zeros(nbytes, dtype=np.uint8)
    for start, flags in _odd_segments(lo, hi, segment_size):
        off = (start - first) // 2 // 8
        packed = np.packbits(flags, bitorder="little")
        bits[off : off + packed.size] = packed
    bits.flags.writeable = False
    return PrimeTable(lo, hi, bits)
