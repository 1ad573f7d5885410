"""Semantic exception hierarchy for the eprb package."""


class EprbError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EprbError, ValueError):
    """An angle or other physical input is outside its domain (NaN, inf)."""


class UsageError(EprbError, ValueError):
    """A configuration or parameter violates an operation's contract."""


class ModelError(EprbError):
    """The requested operation is not defined for the given source model."""


class DataError(EprbError, ValueError):
    """A data structure violates its invariants (e.g. unnormalized table)."""


class EvaluationError(EprbError, ArithmeticError):
    """An integrand returned a non-finite value during averaging."""


class ConsistencyError(EprbError, RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
