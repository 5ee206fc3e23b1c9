"""Exception hierarchy.

Every error raised by the library derives from :class:`GaloisPHError`, and
errors that carry a concrete counterexample expose it as ``witness``.
"""
from __future__ import annotations


class GaloisPHError(ValueError):
    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.witness = witness


# posets and connections
class CycleError(GaloisPHError):
    pass


class UnknownElement(GaloisPHError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class NotMonotone(GaloisPHError):
    pass


class AdjunctionFailure(GaloisPHError):
    pass


class NotInsertion(GaloisPHError):
    pass


class NoAdjoint(GaloisPHError):
    pass


class DomainMismatch(GaloisPHError):
    pass


# linear algebra
class DimensionMismatch(GaloisPHError):
    pass


class NotSubspace(GaloisPHError):
    pass


class EmptyDownset(GaloisPHError):
    pass


# modules
class ShapeMismatch(GaloisPHError):
    pass


class NotFunctorial(GaloisPHError):
    pass


class PresentationMismatch(GaloisPHError):
    pass


class NotIsomorphic(GaloisPHError):
    pass


# diagrams
class BaseMismatch(GaloisPHError):
    pass


class IntervalViolation(GaloisPHError):
    pass


class NotTotalOrder(GaloisPHError):
    pass


class NoTopElement(GaloisPHError):
    pass


class BadDirection(GaloisPHError):
    pass


class EmptyIntersection(GaloisPHError):
    pass


# matchings
class MissingCoords(GaloisPHError):
    pass


class MassMismatch(GaloisPHError):
    pass


class NoNonnegativeRepresentative(GaloisPHError):
    pass


class NegativeDiagram(GaloisPHError):
    pass


# interleavings
class UndefinedDistance(GaloisPHError):
    pass


class InfiniteCost(GaloisPHError):
    pass


class CriticalBetween(GaloisPHError):
    pass


class NotUnique(GaloisPHError):
    pass


# input
class ParseError(GaloisPHError):
    pass


class ClosureViolation(GaloisPHError):
    pass
