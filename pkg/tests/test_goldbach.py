import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primebound import goldbach
from primebound.errors import DomainError
from primebound.goldbach import (
    GoldbachWitness,
    RangeReport,
    binary_witness,
    dois5_check,
    merge_reports,
    ternary_witness,
    tres2_range,
    tres2_witness,
    verify_binary_range,
    verify_ternary_range,
)
from primebound.sieve import build_table

from conftest import brute_min_p, brute_ternary, is_prime_td


@pytest.fixture(scope="module")
def table_1e4():
    return build_table(0, 10_000)


def test_binary_examples():
    assert binary_witness(4) == GoldbachWitness(4, 2, 2)
    assert binary_witness(6) == GoldbachWitness(6, 3, 3)
    assert binary_witness(48) == GoldbachWitness(48, 5, 43)


@pytest.mark.parametrize("n", [3, 2, 0, 7, -4])
def test_binary_domain(n):
    with pytest.raises(DomainError):
        binary_witness(n)


def test_binary_minimality_to_1e4(table_1e4):
    for n in range(4, 10_001, 2):
        w = binary_witness(n, table_1e4)
        assert w.p == brute_min_p(n)
        assert w.validate(table_1e4)


def test_ternary_examples():
    assert astuple(ternary_witness(7)) == (2, 2, 3)
    assert astuple(ternary_witness(9)) == (2, 2, 5)
    assert astuple(ternary_witness(27)) == (2, 2, 23)


def astuple(w):
    return (w.a, w.b, w.c)


@pytest.mark.parametrize("n", [5, 3, 8, 100])
def test_ternary_domain(n):
    with pytest.raises(DomainError):
        ternary_witness(n)


def test_ternary_canonical_against_brute_force(table_1e4):
    for n in range(7, 2001, 2):
        w = ternary_witness(n, table_1e4)
        assert astuple(w) == brute_ternary(n)
        assert w.validate(table_1e4)


def test_reduction_coherence(table_1e4):
    for n in range(9, 10_001, 2):
        b = binary_witness(n - 3, table_1e4)
        assert b is not None
        assert 3 + b.p + b.q == n
        assert ternary_witness(n, table_1e4) is not None


def test_dois5_examples():
    r = dois5_check(8)
    assert (r.m_minus_3_prime, r.c, r.witness) == (True, 5, GoldbachWitness(8, 3, 5))
    r = dois5_check(12)
    assert (r.m_minus_3_prime, r.c) == (False, None)
    assert r.fallback == GoldbachWitness(12, 5, 7)
    r = dois5_check(6)
    assert r.witness == GoldbachWitness(6, 3, 3)
    with pytest.raises(DomainError):
        dois5_check(4)
    with pytest.raises(DomainError):
        dois5_check(9)


def test_tres2_examples():
    assert tres2_witness(1_000_001, 1001) == goldbach.Tres2Witness(1_000_001, 999_983, 18)
    assert tres2_witness(11, 9) == goldbach.Tres2Witness(11, 7, 4)
    assert tres2_witness(23, 7) == goldbach.Tres2Witness(23, 19, 4)
    assert tres2_witness(127, 15) == goldbach.Tres2Witness(127, 113, 14)
    # the 113 -> 127 gap breaks the decomposition once alpha - 1 < 14
    assert tres2_witness(127, 13) is None


@pytest.mark.parametrize("n, alpha", [(10, 7), (7, 7), (21, 5), (13, 15)])
def test_tres2_domain(n, alpha):
    with pytest.raises(DomainError):
        tres2_witness(n, alpha)


def test_tres2_range_matches_scalar(table_1e4):
    batch = tres2_range(1001, 9999, 31, table_1e4)
    for n, p, r, ok in zip(batch.n.tolist(), batch.p.tolist(), batch.r.tolist(), batch.found.tolist()):
        w = tres2_witness(n, 31, table_1e4)
        assert ok == (w is not None)
        assert p == table_1e4.prev_prime(n - 4) and p + r == n
        if ok:
            assert (w.p, w.r) == (p, r) and r % 2 == 0 and 4 <= r <= 30


def test_tres2_range_builds_its_own_table():
    batch = tres2_range(121, 131, 15)
    # 129 - 113 = 16 exceeds alpha - 1 = 14
    assert batch.failures.tolist() == [129]
    assert batch.p.tolist() == [113, 113, 113, 113, 113, 127]


def test_verify_binary_examples():
    r = verify_binary_range(4, 100)
    assert (r.checked, r.failures, r.max_min_p) == (49, [], (19, 98))
    r = verify_binary_range(4, 4)
    assert (r.checked, r.failures) == (1, [])


def test_verify_binary_agrees_with_naive_search_to_1e4():
    r = verify_binary_range(4, 10_000)
    best = max(((brute_min_p(n), -n) for n in range(4, 10_001, 2)))
    assert r.checked == 4999
    assert r.max_min_p == (best[0], -best[1])
    assert r.failures == []


def test_verify_ternary_examples():
    r = verify_ternary_range(7, 99)
    assert (r.checked, r.failures) == (47, [])
    r = verify_ternary_range(7, 7)
    assert (r.checked, r.failures) == (1, [])


def test_verify_ternary_record_is_canonical_b():
    r = verify_ternary_range(7, 5001)
    b, n = r.max_min_p
    assert brute_ternary(n)[1] == b
    assert b == max(brute_ternary(m)[1] for m in range(7, 5002, 2))


@pytest.mark.parametrize("lo, hi", [(2, 10), (5, 10), (4, 11), (10, 4)])
def test_verify_binary_domain(lo, hi):
    with pytest.raises(DomainError):
        verify_binary_range(lo, hi)


def test_verify_ternary_domain():
    with pytest.raises(DomainError):
        verify_ternary_range(5, 11)
    with pytest.raises(DomainError):
        verify_ternary_range(7, 10)


def test_verify_streams_across_blocks(monkeypatch):
    monkeypatch.setattr(goldbach, "BLOCK_SIZE", 1 << 10)
    small_blocks = verify_binary_range(4, 20_000)
    monkeypatch.setattr(goldbach, "BLOCK_SIZE", 1 << 21)
    assert small_blocks.to_dict(timing=False) == verify_binary_range(4, 20_000).to_dict(timing=False)


def blind_windows(monkeypatch, margin=8):
    """Make the vectorized kernel see no primes and search only up to ``margin``."""
    real = goldbach.sieve_window

    def blind(lo, hi):
        first, flags = real(lo, hi)
        return first, flags & False

    monkeypatch.setattr(goldbach, "sieve_window", blind)
    monkeypatch.setattr(goldbach, "WINDOW_MARGIN", margin)


def test_failures_are_reported(monkeypatch):
    blind_windows(monkeypatch)
    r = verify_binary_range(6, 40)
    # n <= 2 * margin had every candidate p "tried"; larger n fall back to the exact search
    assert r.failures == [6, 8, 10, 12, 14, 16]
    assert r.checked == 18
    assert not r.verified


def test_parallel_reports_identical():
    one = verify_binary_range(4, 300_000, threads=1)
    many = verify_binary_range(4, 300_000, threads=3)
    assert one.to_dict(timing=False) == many.to_dict(timing=False)
    one = verify_ternary_range(7, 300_001, threads=1)
    many = verify_ternary_range(7, 300_001, threads=3)
    assert one.to_dict(timing=False) == many.to_dict(timing=False)


def test_merge_is_order_independent():
    parts = [
        RangeReport("binary", 4, 10, 4, [8], (3, 10)),
        RangeReport("binary", 12, 20, 5, [], (5, 14)),
        RangeReport("binary", 22, 30, 5, [24, 30], (5, 12)),
    ]
    results = {
        str(merge_reports(perm).to_dict(timing=False)) for perm in itertools.permutations(parts)
    }
    assert len(results) == 1
    merged = merge_reports(parts)
    assert merged.failures == [8, 24, 30]
    assert merged.max_min_p == (5, 12)
    assert merged.checked == 14
    with pytest.raises(DomainError):
        merge_reports([parts[0], RangeReport("ternary", 7, 9)])


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 400_000))
def test_witness_soundness(k):
    n = 2 * k
    t = build_table(0, n)
    w = binary_witness(n, t)
    assert w.p + w.q == n and is_prime_td(w.p) and is_prime_td(w.q)
    tw = ternary_witness(n + 1, build_table(0, n + 1))
    assert tw.a + tw.b + tw.c == n + 1 and all(map(is_prime_td, (tw.a, tw.b, tw.c)))


@settings(max_examples=50, deadline=None)
@given(k=st.integers(5, 499_000), alpha=st.integers(7, 200))
def test_tres2_consistency(k, alpha, table_1e6):
    n = 2 * k + 1
    if n <= alpha:
        return
    w = tres2_witness(n, alpha, table_1e6)
    if w is not None:
        assert w.p + w.r == n and w.r % 2 == 0 and 4 <= w.r <= alpha - 1
        assert is_prime_td(w.p)
