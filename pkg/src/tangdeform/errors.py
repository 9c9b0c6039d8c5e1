"""Exception hierarchy.

Every domain error carries a ``kind`` string; the CLI reports it verbatim so
callers can branch on it without parsing messages.
"""

from __future__ import annotations


class AlgebraError(Exception):
    """Base class for domain errors raised by tangdeform."""

    kind = "AlgebraError"

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if "kind" not in cls.__dict__:
            cls.kind = cls.__name__


class DivisionByZero(AlgebraError, ZeroDivisionError):
    pass


class MixedFields(AlgebraError):
    pass


class UnsupportedField(AlgebraError):
    pass


class PolySyntaxError(AlgebraError):
    kind = "SyntaxError"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotHomogeneous(AlgebraError):
    def __init__(self, degrees):
        self.degrees = sorted(set(degrees))
        super().__init__(f"terms of mixed degrees {self.degrees}")


class IndexOutOfRange(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class DegreeMismatch(AlgebraError):
    pass


class ZeroPolynomial(AlgebraError):
    pass


class NotBinaryForm(AlgebraError):
    pass


class CharacteristicTooSmall(AlgebraError):
    pass


class NotSingular(AlgebraError):
    pass


class NotSmooth(AlgebraError):
    pass


class IncompletePointList(AlgebraError):
    pass


class MultiplicityTooLow(AlgebraError):
    pass


class MultiplicityMismatch(AlgebraError):
    pass


class NotASquare(AlgebraError):
    pass


class SingularCubic(AlgebraError):
    pass


class BudgetExceeded(AlgebraError):
    pass


class NotCoprime(AlgebraError):
    pass


class TooFewPoints(AlgebraError):
    pass
