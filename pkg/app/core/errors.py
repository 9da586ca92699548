# app/core/errors.py

"""
Exception hierarchy for the toolkit.

Every error carries an ``exit_code`` used by the command line front end:
1 verification failure, 2 usage error, 3 domain error.
"""


class CmzvError(Exception):
    exit_code = 1

    def __init__(self, message: str = "", **detail):
        super().__init__(message or self.__class__.__name__)
        self.detail = detail


class UsageError(CmzvError):
    exit_code = 2


class DomainError(CmzvError):
    exit_code = 3


class VerificationFailure(CmzvError):
    exit_code = 1


# ========== USAGE ==========


class ParseError(UsageError):
    pass


class SchemaError(UsageError):
    pass


class UnknownGenerator(UsageError):
    pass


# ========== CYCLOTOMIC ==========


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class NotDivisible(DomainError):
    pass


class DegenerateTuple(DomainError):
    pass


class LevelCapExceeded(DomainError):
    pass


# ========== GROUP-LIKE SERIES ==========


class AlphabetMismatch(DomainError):
    pass


class ModeMismatch(DomainError):
    pass


class NotGroupLike(DomainError):
    pass


class NonInjectiveMap(DomainError):
    pass


class InconsistentInput(DomainError):
    pass


# ========== GEOMETRY ==========


class DegenerateTriple(DomainError):
    pass


class DoesNotSplit(DomainError):
    def __init__(self, message: str = "", remaining=None):
        super().__init__(message, remaining=remaining)
        self.remaining = remaining


class ConstantResult(DomainError):
    pass


class NotUnital(DomainError):
    pass


class EndpointMismatch(DomainError):
    pass


class NotConnected(DomainError):
    pass


# ========== CONVERSION ==========


class Divergent(DomainError):
    pass


class NotConvergentWord(DomainError):
    pass


class NonUnitaryPole(DomainError):
    pass


class UnderdeterminedSystem(DomainError):
    pass


class InconsistentLinearTerms(DomainError):
    pass


class RoundingAmbiguous(DomainError):
    pass


class UnsupportedPole(DomainError):
    pass


class DivergentWord(DomainError):
    pass


class ConvergenceDomain(DomainError):
    pass


class AlphaNotCyclotomic(DomainError):
    pass


class NoCatalogEntry(DomainError):
    pass


# ========== RELATIONS / NUMERIC / CATALOG ==========


class WeightMismatch(DomainError):
    pass


class Unconverged(DomainError):
    pass


class PathThroughPole(DomainError):
    pass


class PrecisionTooLow(DomainError):
    pass


class ValidationFailed(DomainError):
    def __init__(self, message: str = "", entry_id: str | None = None):
        super().__init__(message, entry_id=entry_id)
        self.entry_id = entry_id
