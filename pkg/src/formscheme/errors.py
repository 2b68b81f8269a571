"""Exception types.

Three families map onto the CLI exit codes: bad input (1), a failed
self-check (2) and an exceeded enumeration cap (3).
"""

from __future__ import annotations


class FormSchemeError(Exception):
    """Base class for every error raised by formscheme."""


class InvalidInput(FormSchemeError, ValueError):
    """The caller asked for something outside the supported domain."""


class ConsistencyError(FormSchemeError, AssertionError):
    """An exact identity failed; this always indicates an implementation bug."""


class CapExceeded(FormSchemeError):
    """An enumeration would exceed the configured cap."""


class DivisionByZero(FormSchemeError, ZeroDivisionError):
    pass


# Input errors
class FieldError(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class InadmissibleIndex(InvalidInput):
    pass


class SingularMatrix(InvalidInput):
    pass


class SingularBasis(SingularMatrix):
    pass


class SingularTransform(SingularMatrix):
    pass


class Inconsistent(InvalidInput):
    pass


class OddCharRequired(InvalidInput):
    pass


class UnsupportedCase(InvalidInput):
    pass


class ParityMismatch(InvalidInput):
    pass


class OddCharacteristic(InvalidInput):
    pass


class NotAdditive(InvalidInput):
    pass


class BadSubspace(InvalidInput):
    pass


class DegenerateY(InvalidInput):
    pass


# Self-check failures
class OrthogonalityViolation(ConsistencyError):
    pass


class ClassificationInconsistency(ConsistencyError):
    pass


class NonIntegralSum(ConsistencyError):
    pass


class EigenConsistencyViolation(ConsistencyError):
    pass


class NegativeDual(ConsistencyError):
    pass


def exit_code_for(exc: BaseException) -> int:
    """Exit code the CLI reports for an exception raised by a command."""
    if isinstance(exc, CapExceeded):
        return 3
    if isinstance(exc, ConsistencyError):
        return 2
    return 1
