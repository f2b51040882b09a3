"""Binary and ternary Goldbach witnesses and range verification.

Witnesses follow the canonical policy: smallest first component, then the
smallest second. Range verification streams over sieve windows and keeps
only aggregates (checked count, failures, largest minimal prime).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _parallel
from .errors import DomainError
from .sieve import PrimeTable, build_table, require_budget, sieve_window, small_primes

log = logging.getLogger(__name__)

# Witness search depth inside one window; minimal p stays far below this for n <= 1e9.
WINDOW_MARGIN = 1 << 15
BLOCK_SIZE = 1 << 21


@dataclass(frozen=True)
class GoldbachWitness:
    n: int
    p: int
    q: int

    def validate(self, table: PrimeTable) -> bool:
        return (
            self.p + self.q == self.n
            and self.p <= self.q
            and table.is_prime(self.p)
            and table.is_prime(self.q)
        )


@dataclass(frozen=True)
class TernaryWitness:
    n: int
    a: int
    b: int
    c: int

    def validate(self, table: PrimeTable) -> bool:
        return (
            self.a + self.b + self.c == self.n
            and self.a <= self.b <= self.c
            and all(table.is_prime(x) for x in (self.a, self.b, self.c))
        )


@dataclass(frozen=True)
class Dois5Result:
    """Evidence for the case m = 3 + c, with the ordinary witness as fallback."""

    m: int
    m_minus_3_prime: bool
    c: int | None
    fallback: GoldbachWitness | None

    @property
    def witness(self) -> GoldbachWitness:
        if self.c is not None:
            return GoldbachWitness(self.m, 3, self.c)
        assert self.fallback is not None
        return self.fallback


@dataclass(frozen=True)
class Tres2Witness:
    n: int
    p: int
    r: int


@dataclass
class RangeReport:
    """Aggregate outcome of verifying every eligible n in [lo, hi].

    ``max_min_p`` is ``(p, n)``: the largest canonical search prime seen and
    the smallest n attaining it. For binary ranges that prime is the minimal
    p; for ternary ranges it is the canonical middle prime b.
    """

    kind: str
    lo: int
    hi: int
    checked: int = 0
    failures: list[int] = field(default_factory=list)
    max_min_p: tuple[int, int] | None = None
    elapsed_seconds: float = 0.0

    @property
    def verified(self) -> bool:
        return not self.failures

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "lo": self.lo,
            "hi": self.hi,
            "checked": self.checked,
            "failures": list(self.failures),
            "max_min_p": None
            if self.max_min_p is None
            else {"p": self.max_min_p[0], "n": self.max_min_p[1]},
        }
        if timing:
            out["elapsed_seconds"] = round(self.elapsed_seconds, 6)
        return out


def _better(a: tuple[int, int] | None, b: tuple[int, int] | None) -> tuple[int, int] | None:
    if a is None:
        return b
    if b is None:
        return a
    # larger p wins; ties go to the smaller n
    return max(a, b, key=lambda t: (t[0], -t[1]))


def merge_reports(reports: Iterable[RangeReport]) -> RangeReport:
    """Combine reports over disjoint sub-ranges; the result is order-independent."""
    reports = list(reports)
    if not reports:
        raise DomainError("nothing to merge")
    kinds = {r.kind for r in reports}
    if len(kinds) != 1:
        raise DomainError(f"cannot merge reports of kinds {sorted(kinds)}")
    out = RangeReport(kinds.pop(), min(r.lo for r in reports), max(r.hi for r in reports))
    for r in reports:
        out.checked += r.checked
        out.failures.extend(r.failures)
        out.max_min_p = _better(out.max_min_p, r.max_min_p)
        out.elapsed_seconds = max(out.elapsed_seconds, r.elapsed_seconds)
    out.failures.sort()
    return out


def _covering_table(n: int, table: PrimeTable | None) -> PrimeTable:
    if table is not None:
        return table
    return build_table(0, max(n, 2))


def _min_pair(m: int, low: int, table: PrimeTable) -> int | None:
    """Smallest prime b >= low with b <= m - b and m - b prime."""
    if m % 2:
        # an odd sum of two primes must use 2
        return 2 if low <= 2 and m - 2 >= 2 and table.is_prime(m - 2) else None
    a, chunk = low, 1 << 12
    while a <= m // 2:
        b = min(m // 2, a + chunk)
        cand = table.primes_in(a, b)
        hit = np.flatnonzero(table.is_prime_many(m - cand))
        if hit.size:
            return int(cand[hit[0]])
        a, chunk = b + 1, chunk * 2
    return None


def binary_witness(n: int, table: PrimeTable | None = None) -> GoldbachWitness | None:
    """Canonical n = p + q with minimal prime p, or None if none exists."""
    if n <= 2 or n % 2:
        raise DomainError(f"binary Goldbach needs an even n > 2, got {n}")
    table = _covering_table(n, table)
    p = _min_pair(n, 2, table)
    return None if p is None else GoldbachWitness(n, p, n - p)


def ternary_witness(n: int, table: PrimeTable | None = None) -> TernaryWitness | None:
    """Canonical n = a + b + c with (a, b) lexicographically minimal."""
    if n <= 5 or n % 2 == 0:
        raise DomainError(f"ternary Goldbach needs an odd n > 5, got {n}")
    table = _covering_table(n, table)
    if table.is_prime(n - 4):
        return TernaryWitness(n, 2, 2, n - 4)
    for a in table.primes_in(3, n // 3).tolist():
        b = _min_pair(n - a, a, table)
        if b is not None:
            return TernaryWitness(n, a, b, n - a - b)
    return None


def dois5_check(m: int, table: PrimeTable | None = None) -> Dois5Result:
    """Check whether m - 3 is prime, i.e. whether (2, 2, m-3) lifts to (3, m-3)."""
    if m <= 4 or m % 2:
        raise DomainError(f"dois5 check needs an even m > 4, got {m}")
    table = _covering_table(m, table)
    c = m - 3
    if table.is_prime(c):
        return Dois5Result(m, True, c, None)
    return Dois5Result(m, False, None, binary_witness(m, table))


def _check_tres2(n: int, alpha: int) -> None:
    if alpha < 7:
        raise DomainError(f"alpha must be >= 7, got {alpha}")
    if n % 2 == 0 or n <= alpha:
        raise DomainError(f"tres2 needs an odd n > alpha, got n={n}, alpha={alpha}")


def tres2_witness(n: int, alpha: int, table: PrimeTable | None = None) -> Tres2Witness | None:
    """n = p + r with p the largest prime <= n - 4 and r even in [4, alpha - 1].

    None means the gap below n - 4 exceeds alpha - 4.
    """
    _check_tres2(n, alpha)
    table = _covering_table(n, table)
    p = table.prev_prime(n - 4)
    r = n - p
    if r > alpha - 1:
        return None
    if r % 2:
        raise AssertionError(f"odd remainder {r} for odd n={n}, p={p}")
    return Tres2Witness(n, p, r)


@dataclass(frozen=True)
class Tres2Batch:
    """Vectorized tres2 decompositions for every odd n in a range."""

    alpha: int
    n: np.ndarray
    p: np.ndarray
    r: np.ndarray

    @property
    def found(self) -> np.ndarray:
        return self.r <= self.alpha - 1

    @property
    def failures(self) -> np.ndarray:
        return self.n[~self.found]


def tres2_range(lo: int, hi: int, alpha: int, table: PrimeTable | None = None) -> Tres2Batch:
    """tres2_witness for every odd n in [lo, hi], via one sorted prime array."""
    lo |= 1
    _check_tres2(lo, alpha)
    if hi < lo:
        raise DomainError(f"empty range [{lo}, {hi}]")
    if table is None:
        require_budget(hi)
        table = build_table(max(0, lo - 4 - 2 * alpha), hi)
    ns = np.arange(lo, hi + 1, 2, dtype=np.int64)
    primes = table.primes_in(table.lo, hi)
    idx = np.searchsorted(primes, ns - 4, side="right") - 1
    if idx.size and idx[0] < 0:
        # no prime in the window below the first n; widen to the full range
        primes = build_table(0, hi).primes()
        idx = np.searchsorted(primes, ns - 4, side="right") - 1
    ps = primes[idx]
    return Tres2Batch(alpha, ns, ps, ns - ps)


# ---------------------------------------------------------------------------
# range verification kernels


def _min_p_block(ms: np.ndarray, first: int, flags: np.ndarray, low: int) -> np.ndarray:
    """Minimal odd prime p >= low with m - p prime, per even m; 0 if none in the window.

    ``flags`` covers odds from ``first``; every m - p probed must lie inside it.
    """
    result = np.zeros(ms.size, dtype=np.int64)
    todo = np.arange(ms.size)
    top = int(ms[-1]) // 2 if ms.size else 0
    for p in small_primes(WINDOW_MARGIN).tolist():
        if p < low or p == 2:
            continue
        if todo.size == 0 or p > top:
            break
        cand = ms[todo]
        hits = flags[(cand - p - first) >> 1] & (cand >= 2 * p)
        result[todo[hits]] = p
        todo = todo[~hits]
    return result


def _window(a: int, hi: int) -> tuple[int, np.ndarray]:
    return sieve_window(max(0, a - WINDOW_MARGIN), hi)


def _binary_chunk(lo: int, hi: int) -> RangeReport:
    t0 = time.perf_counter()
    report = RangeReport("binary", lo, hi)
    for a in range(lo, hi + 1, BLOCK_SIZE):
        b = min(hi, a + BLOCK_SIZE - 1)
        ms = np.arange(a, b + 1, 2, dtype=np.int64)
        first, flags = _window(a, b)
        min_p = _min_p_block(ms, first, flags, 3)
        if a == 4:
            min_p[0] = 2
        for i in np.flatnonzero(min_p == 0).tolist():
            n = int(ms[i])
            w = None if n <= 2 * WINDOW_MARGIN else binary_witness(n)
            if w is None:
                log.warning("binary Goldbach failure at n=%d", n)
                report.failures.append(n)
            else:
                min_p[i] = w.p
        report.checked += ms.size
        j = int(np.argmax(min_p))
        report.max_min_p = _better(report.max_min_p, (int(min_p[j]), int(ms[j])))
        log.debug("binary block [%d, %d] done", a, b)
    report.elapsed_seconds = time.perf_counter() - t0
    return report


def _ternary_chunk(lo: int, hi: int) -> RangeReport:
    t0 = time.perf_counter()
    report = RangeReport("ternary", lo, hi)
    for a in range(lo, hi + 1, BLOCK_SIZE):
        b = min(hi, a + BLOCK_SIZE - 1)
        ns = np.arange(a, b + 1, 2, dtype=np.int64)
        first, flags = _window(a - 4, b)
        mid = np.full(ns.size, 2, dtype=np.int64)
        rest = np.flatnonzero(~flags[(ns - 4 - first) >> 1])
        # not (2, 2, n-4): canonical a is 3 and b is the minimal binary prime of n-3
        mid[rest] = _min_p_block(ns[rest] - 3, first, flags, 3)
        for i in np.flatnonzero(mid == 0).tolist():
            n = int(ns[i])
            w = ternary_witness(n)
            if w is None:
                log.warning("ternary Goldbach failure at n=%d", n)
                report.failures.append(n)
            else:
                mid[i] = w.b
        report.checked += ns.size
        j = int(np.argmax(mid))
        report.max_min_p = _better(report.max_min_p, (int(mid[j]), int(ns[j])))
        log.debug("ternary block [%d, %d] done", a, b)
    report.elapsed_seconds = time.perf_counter() - t0
    return report


def _verify(kind: str, lo: int, hi: int, threads: int) -> RangeReport:
    t0 = time.perf_counter()
    require_budget(hi)
    chunk = _binary_chunk if kind == "binary" else _ternary_chunk
    jobs = _parallel.partition(lo, hi, max(1, threads), step=2, align=BLOCK_SIZE)
    report = merge_reports(_parallel.ordered_map(chunk, jobs, threads))
    report.lo, report.hi = lo, hi
    report.elapsed_seconds = time.perf_counter() - t0
    return report


def verify_binary_range(lo: int, hi: int, threads: int = 1) -> RangeReport:
    """Check every even n in [lo, hi] has a Goldbach witness."""
    if lo < 4 or lo % 2 or hi % 2 or lo > hi:
        raise DomainError(f"binary range needs even 4 <= lo <= hi, got [{lo}, {hi}]")
    return _verify("binary", lo, hi, threads)


def verify_ternary_range(lo: int, hi: int, threads: int = 1) -> RangeReport:
    """Check every odd n in [lo, hi] is a sum of three primes."""
    if lo < 7 or lo % 2 == 0 or hi % 2 == 0 or lo > hi:
        raise DomainError(f"ternary range needs odd 7 <= lo <= hi, got [{lo}, {hi}]")
    return _verify("ternary", lo, hi, threads)
