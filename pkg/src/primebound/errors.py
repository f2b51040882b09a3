"""Exception types shared across the toolkit."""


class PrimeboundError(Exception):
    """Base class for all toolkit errors."""


class DomainError(PrimeboundError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OutOfRangeError(PrimeboundError, IndexError):
    """A query falls outside the range covered by a prime table."""


class CapacityError(PrimeboundError, MemoryError):
    """A request would exceed the configured sieve memory budget."""


class UndefinedResult(PrimeboundError, ArithmeticError):
    """A statistic is undefined for the given input (empty set, zero window)."""
