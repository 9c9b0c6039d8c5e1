"""Exact coefficient fields: the rationals and prime fields F_p.

Polynomials and matrices store *raw* field elements (``gmpy2.mpq`` for the
rationals, ``int`` residues in ``[0, p)`` for F_p) and do arithmetic through
the owning :class:`Field`.  :class:`Scalar` is the tagged value type used at
API boundaries, where mixing fields must be caught.
"""

from __future__ import annotations

import enum
import functools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

import gmpy2
from gmpy2 import mpq

from .errors import DivisionByZero, MixedFields, UnsupportedField

MAX_CHARACTERISTIC = 2**31


class FieldKind(str, enum.Enum):
    RATIONALS = "Rationals"
    PRIME_FIELD = "PrimeField"


@dataclass(frozen=True)
class Field:
    """Descriptor of a coefficient field, with arithmetic on raw elements."""

    kind: FieldKind
    characteristic: int

    def __post_init__(self):
        if self.kind is FieldKind.RATIONALS:
            if self.characteristic != 0:
                raise ValueError("the rationals have characteristic 0")
        else:
            p = self.characteristic
            if not (2 <= p <= MAX_CHARACTERISTIC and gmpy2.is_prime(p)):
                raise UnsupportedField(f"characteristic must be a prime <= 2^31, got {p}")

    @property
    def is_prime_field(self) -> bool:
        return self.kind is FieldKind.PRIME_FIELD

    @property
    def zero(self):
        return mpq(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return mpq(1) if self.characteristic == 0 else 1

    def __str__(self) -> str:
        return "q" if self.characteristic == 0 else f"fp:{self.characteristic}"

    # -- conversion ---------------------------------------------------------

    def __call__(self, value: Any):
        """Coerce an int, Fraction, mpq, Scalar or text into a raw element."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise MixedFields(f"{value.field} element used in {self}")
            return value.value
        if isinstance(value, str):
            return self.parse(value)
        p = self.characteristic
        if p == 0:
            if isinstance(value, Fraction):
                return mpq(value.numerator, value.denominator)
            return mpq(value)
        if isinstance(value, int) or type(value).__name__ == "mpz":
            return int(value) % p
        q = mpq(value)
        if q.denominator % p == 0:
            raise DivisionByZero(f"denominator {q.denominator} vanishes mod {p}")
        return int(q.numerator) * pow(int(q.denominator), -1, p) % p

    def parse(self, text: str):
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                num, den = int(num), int(den)
            else:
                num, den = int(text), 1
        except ValueError:
            raise ValueError(f"not a field element: {text!r}") from None
        if den == 0:
            raise DivisionByZero(f"zero denominator in {text!r}")
        return self(mpq(num, den)) if den != 1 else self(num)

    def format(self, a) -> str:
        if self.characteristic == 0:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def to_json(self, a):
        """Integers stay integers; proper fractions become "a/b" strings."""
        if self.characteristic == 0 and a.denominator != 1:
            return f"{a.numerator}/{a.denominator}"
        return int(a) if self.characteristic else int(a.numerator)

    # -- arithmetic on raw elements -----------------------------------------

    def add(self, a, b):
        return a + b if self.characteristic == 0 else (a + b) % self.characteristic

    def sub(self, a, b):
        return a - b if self.characteristic == 0 else (a - b) % self.characteristic

    def mul(self, a, b):
        return a * b if self.characteristic == 0 else a * b % self.characteristic

    def neg(self, a):
        return -a if self.characteristic == 0 else -a % self.characteristic

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        if self.characteristic == 0:
            return 1 / a
        return pow(a, -1, self.characteristic)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if self.characteristic == 0:
            return a**e
        return pow(a, e, self.characteristic)

    def from_int(self, n: int):
        return mpq(n) if self.characteristic == 0 else n % self.characteristic

    # -- finite field helpers -----------------------------------------------

    def elements(self) -> Iterator[int]:
        if self.characteristic == 0:
            raise UnsupportedField("the rationals are not enumerable")
        return iter(range(self.characteristic))

    def random_element(self, rng: random.Random, bound: int = 3):
        """Uniform on [-bound, bound] over Q, uniform on F_p otherwise."""
        if self.characteristic == 0:
            return mpq(rng.randint(-bound, bound))
        return rng.randrange(self.characteristic)

    def sqrt(self, a):
        """A square root of ``a`` in the field, or None when none exists."""
        if self.characteristic == 0:
            if a < 0:
                return None
            num, den = a.numerator, a.denominator
            if gmpy2.is_square(num) and gmpy2.is_square(den):
                return mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
            return None
        if a == 0:
            return 0
        from sympy.ntheory import sqrt_mod

        root = sqrt_mod(a, self.characteristic)
        return None if root is None else int(root)


QQ = Field(FieldKind.RATIONALS, 0)


@functools.lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(FieldKind.PRIME_FIELD, p)


def field_from_text(text: str) -> Field:
    """Parse ``q`` or ``fp:<prime>``."""
    text = text.strip().lower()
    if text in ("q", "qq", "rationals"):
        return QQ
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise UnsupportedField(f"bad characteristic in {text!r}") from None
        return GF(p)
    raise UnsupportedField(f"unknown field {text!r}; use 'q' or 'fp:<prime>'")


@dataclass(frozen=True)
class Scalar:
    """An element of a specific field.

    Arithmetic between scalars of different fields raises MixedFields.
    """

    field: Field
    value: Any

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _other(self, other) -> Any:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise MixedFields(f"{self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def _wrap(self, raw) -> Scalar:
        return Scalar(self.field, raw)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def inv(self) -> Scalar:
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise MixedFields(f"{self.field} and {other.field}")
            return self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"Scalar({self}, {self.field})"


def int_embed(n: int, field: Field) -> Scalar:
    """Image of the integer ``n`` under the canonical map Z -> field."""
    return Scalar(field, field.from_int(n))
