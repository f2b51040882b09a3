"""Log-space arithmetic for the conditional gap bound.

beta is astronomically large (around 10**7194), so it is carried only as
log10(beta). Every quantity needed is a function of ln(beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

LOG10_E = math.log10(math.e)
# factor in the worst-case condition alpha > WORST_CASE_FACTOR * ln(beta)**2
WORST_CASE_FACTOR = 10


def ln_beta(log10_beta: float) -> float:
    return log10_beta / LOG10_E


@dataclass(frozen=True)
class BoundScenario:
    alpha: int
    log10_beta: float
    r: float

    def __post_init__(self) -> None:
        if self.alpha < 7:
            raise DomainError(f"alpha must be >= 7, got {self.alpha}")
        if self.log10_beta <= math.log10(self.alpha):
            raise DomainError(
                f"beta = 10^{self.log10_beta} must exceed alpha = {self.alpha}"
            )
        if self.r <= 0:
            raise DomainError(f"exponent must be positive, got {self.r}")

    @property
    def ln_beta(self) -> float:
        return ln_beta(self.log10_beta)

    @property
    def alpha_float(self) -> float:
        return float(self.alpha)

    def roundtrip_error(self) -> float:
        """Relative error of (ln beta)**r against alpha, computed in log space."""
        return abs(math.expm1(self.r * math.log(self.ln_beta) - math.log(self.alpha)))


def required_exponent(alpha: int | float, log10_beta: float) -> float:
    """r = ln(alpha) / ln(ln(beta)), so that (ln beta)**r == alpha."""
    if alpha < 3:
        raise DomainError(f"alpha must be >= 3, got {alpha}")
    lb = ln_beta(log10_beta)
    if lb <= math.e:
        raise DomainError(f"ln(beta) = {lb:.6g} must exceed e so that ln ln beta > 1")
    return math.log(alpha) / math.log(lb)


def cramer_gap_estimate(log10_beta: float) -> float:
    """ln(beta)**2, the Cramér-scale estimate of the largest gap below beta."""
    if log10_beta <= 0:
        raise DomainError(f"log10(beta) must be positive, got {log10_beta}")
    return (log10_beta / LOG10_E) ** 2


@dataclass(frozen=True)
class WorstCase:
    rhs: float
    holds: bool


def worst_case(alpha: int | float, log10_beta: float) -> WorstCase:
    """alpha > 10 ln(beta)**2, without the scenario invariants."""
    rhs = WORST_CASE_FACTOR * cramer_gap_estimate(log10_beta)
    return WorstCase(rhs, alpha > rhs)


def worst_case_condition(scenario: BoundScenario) -> WorstCase:
    return worst_case(scenario.alpha, scenario.log10_beta)


def _sci(x: float, digits: int = 4) -> str:
    return f"{x:.{digits - 1}e}"


@dataclass(frozen=True)
class ScenarioReport:
    scenario: BoundScenario
    ln2_beta: float
    worst: WorstCase

    @property
    def r(self) -> float:
        return self.scenario.r

    def to_dict(self) -> dict:
        s = self.scenario
        return {
            "alpha": s.alpha,
            "log10_beta": s.log10_beta,
            "ln_beta": s.ln_beta,
            "r": s.r,
            "ln2_beta": self.ln2_beta,
            "rhs": self.worst.rhs,
            "holds": self.worst.holds,
            "roundtrip_rel_error": s.roundtrip_error(),
        }

    def summary(self) -> str:
        s = self.scenario
        verdict = "holds" if self.worst.holds else "FAILS"
        lines = [
            f"alpha (verification frontier)    = {s.alpha} ({_sci(s.alpha_float)})",
            f"beta                             = 10^{s.log10_beta:g}",
            f"ln beta = log10(beta) / log10(e) = {s.ln_beta:.6f}",
            f"Cramer max-gap estimate ln^2 beta = {_sci(self.ln2_beta)} ({self.ln2_beta:,.1f})",
            f"worst-case rhs 10 * ln^2 beta     = {_sci(self.worst.rhs)}",
            f"alpha > 10 ln^2 beta              : {verdict}",
            f"r = ln(alpha) / ln(ln beta)       = {s.r:.4f}",
            f"(ln beta)^r = alpha, rel. error   = {s.roundtrip_error():.2e}",
            "conditional statement: every gap between consecutive primes below beta",
            f"  is < (ln beta)^{s.r:.4f} with beta = 10^{s.log10_beta:g}",
        ]
        return "\n".join(lines)


def scenario_report(alpha: int, log10_beta: float) -> ScenarioReport:
    """Assemble r, ln^2 beta, the worst-case verdict and the final gap statement.

    Raises DomainError when beta <= alpha or alpha is too small.
    """
    if log10_beta <= math.log10(max(alpha, 1)):
        raise DomainError(f"beta = 10^{log10_beta} must exceed alpha = {alpha}")
    r = required_exponent(alpha, log10_beta)
    scenario = BoundScenario(alpha, log10_beta, r)
    return ScenarioReport(scenario, cramer_gap_estimate(log10_beta), worst_case_condition(scenario))
