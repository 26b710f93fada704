"""Exception types shared across the package."""

from __future__ import annotations


class BiprojError(Exception):
    """Base class for all package errors."""


class DomainError(BiprojError, ValueError):
    """An argument lies outside the domain of the operation."""


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class ConditionViolated(DomainError):
    """A family side condition failed; ``condition`` names it."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        self.detail = detail
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class TooLarge(DomainError):
    pass


class NonInvertible(DomainError):
    pass


class PreconditionViolated(DomainError):
    """The reduction to monomial maps does not apply to this pair."""


class SearchFailed(BiprojError, RuntimeError):
    pass


class UnsupportedM(DomainError):
    def __init__(self, family: str, m: int, reason: str):
        self.family = family
        self.m = m
        self.reason = reason
        super().__init__(f"{family} at m={m}: {reason}")
