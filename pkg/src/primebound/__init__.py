"""Desk-scale prime sieving, Goldbach witnesses, maximal gaps and Cramér-model checks."""

__version__ = "0.1.0"

from .errors import CapacityError, DomainError, OutOfRangeError, PrimeboundError, UndefinedResult
from .sieve import PrimeTable, build_table, segmented_primes

__all__ = [
    "CapacityError",
    "DomainError",
    "OutOfRangeError",
    "PrimeTable",
    "PrimeboundError",
    "UndefinedResult",
    "__version__",
    "build_table",
    "segmented_primes",
]
