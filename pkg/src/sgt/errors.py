"""Exception hierarchy.

``InvalidInput`` subclasses map to CLI exit code 2; ``TheoremFalsified``
maps to exit code 3 and must never be swallowed by batch drivers.
"""
from __future__ import annotations


class SemigroupError(Exception):
    """Base class; carries an optional witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidInput(SemigroupError):
    pass


class DimensionMismatch(InvalidInput):
    pass


class OutOfRangeEntry(InvalidInput):
    pass


class NotAssociative(InvalidInput):
    pass


class TooLarge(InvalidInput):
    pass


class NotRegular(InvalidInput):
    pass


class NotIdempotent(InvalidInput):
    pass


class NotOrthodox(InvalidInput):
    pass


class NotRightGeneralizedInverse(InvalidInput):
    pass


class NotACongruence(InvalidInput):
    pass


class NotSurjective(InvalidInput):
    pass


class PreconditionFailed(InvalidInput):
    pass


class MissingStar(InvalidInput):
    pass


class StarAxiomViolated(InvalidInput):
    pass


class BaseNotInverse(InvalidInput):
    pass


class ActionLawViolated(InvalidInput):
    pass


class E1Violated(InvalidInput):
    pass


class E2Violated(InvalidInput):
    pass


class PNotIdempotent(InvalidInput):
    pass


class NotEtale(InvalidInput):
    pass


class NoGlobalSupport(InvalidInput):
    pass


class InvalidParams(InvalidInput):
    pass


class GenerationExhausted(InvalidInput):
    pass


class BudgetExceeded(InvalidInput):
    pass


class TheoremFalsified(SemigroupError):
    """An internal verification of a proven statement failed.

    Either the implementation is wrong or a genuine counterexample was found;
    both must halt whatever is running.
    """

    def __init__(self, statement: str, message: str, witness=None):
        super().__init__(f"{statement}: {message}", witness)
        self.statement = statement
