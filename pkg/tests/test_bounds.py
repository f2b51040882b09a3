import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from primebound.bounds import (
    BoundScenario,
    cramer_gap_estimate,
    required_exponent,
    scenario_report,
    worst_case,
    worst_case_condition,
)
from primebound.errors import DomainError


def test_headline_exponent():
    assert required_exponent(10**16, 7194) == pytest.approx(3.7921, abs=5e-4)


def test_identity_exponent():
    # ln(alpha) == ln ln beta exactly when alpha == ln beta
    ln_beta = 7194 * math.log(10)
    assert required_exponent(ln_beta, 7194) == pytest.approx(1.0, rel=1e-12)


def test_exponent_other_frontiers():
    # direct evaluations at 40 digits with mpmath
    assert required_exponent(10**16, 43000) == pytest.approx(3.2027645339273214, rel=1e-10)
    assert required_exponent(4 * 10**14, 7194) == pytest.approx(3.4608712601131934, rel=1e-10)


def test_exponent_domain():
    with pytest.raises(DomainError):
        required_exponent(10**16, 1.0)  # ln beta ~ 2.3 < e
    with pytest.raises(DomainError):
        required_exponent(2, 7194)


def test_cramer_gap_estimate():
    v = cramer_gap_estimate(7194)
    assert v < 274_400_000
    assert v == pytest.approx(2.744e8, rel=1e-3)
    assert cramer_gap_estimate(math.log10(math.e)) == pytest.approx(1.0, rel=1e-15)
    assert cramer_gap_estimate(9715) == pytest.approx(5.004e8, rel=1e-3)
    with pytest.raises(DomainError):
        cramer_gap_estimate(0)


def test_worst_case_condition():
    s = BoundScenario(10**16, 7194, required_exponent(10**16, 7194))
    res = worst_case_condition(s)
    assert res.rhs == pytest.approx(2.744e9, rel=1e-3)
    assert res.holds
    assert not worst_case(1, 7194).holds
    assert not worst_case(1, 1).holds
    res = worst_case(10**9, 7194)
    assert res.rhs > 10**9 and not res.holds


def test_scenario_report_headline():
    rep = scenario_report(10**16, 7194)
    assert rep.r == pytest.approx(3.7921, abs=5e-4)
    assert rep.worst.holds
    doc = rep.to_dict()
    assert set(doc) >= {"r", "ln2_beta", "rhs", "holds"}
    text = rep.summary()
    assert "3.7922" in text and "2.744e+09" in text


def test_scenario_report_richstein_frontier():
    assert scenario_report(4 * 10**14, 7194).r == pytest.approx(3.460871, abs=1e-6)


def test_degenerate_scenarios():
    with pytest.raises(DomainError):
        scenario_report(10**16, 15)
    with pytest.raises(DomainError):
        BoundScenario(5, 7194, 1.0)
    with pytest.raises(DomainError):
        BoundScenario(100, 1.5, 1.0)


def test_reproduction_to_four_figures():
    rep = scenario_report(10**16, 7194)
    assert f"{rep.r:.4g}" == "3.792"
    assert f"{rep.ln2_beta:.4g}" == "2.744e+08"
    assert f"{rep.worst.rhs:.4g}" == "2.744e+09"


@given(alpha=st.integers(7, 2**63 - 1), log10_beta=st.floats(20, 1e6))
def test_round_trip(alpha, log10_beta):
    r = required_exponent(alpha, log10_beta)
    s = BoundScenario(alpha, log10_beta, r) if log10_beta > math.log10(alpha) else None
    if s is not None:
        assert s.roundtrip_error() < 1e-9
    lb = log10_beta * math.log(10)
    assert abs(lb**r - alpha) / alpha < 1e-9


@given(alpha=st.integers(7, 10**18), a=st.floats(2, 1e5), d=st.floats(1e-3, 1e5))
def test_monotonicity(alpha, a, d):
    assert required_exponent(alpha, a + d) < required_exponent(alpha, a)
    assert required_exponent(alpha + 1, a) >= required_exponent(alpha, a)
    assert required_exponent(2 * alpha, a) > required_exponent(alpha, a)


@given(log10_beta=st.floats(1e-3, 1e6))
def test_rhs_is_ten_times_estimate(log10_beta):
    assert worst_case(10, log10_beta).rhs == 10 * cramer_gap_estimate(log10_beta)


def test_frozen_values_against_mpmath():
    import mpmath

    from primebound.gaps import gap_exponent

    mpmath.mp.dps = 40
    ln10 = mpmath.log(10)
    for alpha, lb in [(10**16, 7194), (10**16, 43000), (4 * 10**14, 7194)]:
        exact = mpmath.log(alpha) / mpmath.log(lb * ln10)
        assert required_exponent(alpha, lb) == pytest.approx(float(exact), rel=1e-12)
    assert cramer_gap_estimate(7194) == pytest.approx(float((7194 * ln10) ** 2), rel=1e-12)
    for p, g in [(113, 14), (1327, 34)]:
        exact = mpmath.log(g) / mpmath.log(mpmath.log(p))
        assert gap_exponent(p, g) == pytest.approx(float(exact), rel=1e-12)
