"""Exact scalars for weight labels: rationals and elements of Q(sqrt 2).

Weight classification (integrality of coroot pairings, sign of the level)
must be decided exactly.  Rational labels are plain ``fractions.Fraction``;
for weights with an irrational level we adjoin a single fixed quadratic
irrationality and work in Q(sqrt 2).  Only addition and scaling by
rationals are ever needed for pairings, but full ring arithmetic is cheap
so it is provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

RationalLike = int | Fraction

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Surd:
    """The exact number ``a + b*sqrt(2)`` with rational ``a``, ``b``.

    >>> x = Surd(0, 1)
    >>> (x * x).rational
    Fraction(2, 1)
    >>> (x - x).is_zero()
    True
    """

    rational: Fraction
    radical: Fraction

    def __init__(self, rational: RationalLike = 0, radical: RationalLike = 0):
        object.__setattr__(self, "rational", Fraction(rational))
        object.__setattr__(self, "radical", Fraction(radical))

    @staticmethod
    def _coerce(value) -> "Surd | None":
        if isinstance(value, Surd):
            return value
        if isinstance(value, (int, Fraction)):
            return Surd(value, 0)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Surd(self.rational + other.rational, self.radical + other.radical)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.rational, -self.radical)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Surd(
            self.rational * other.rational + 2 * self.radical * other.radical,
            self.rational * other.radical + self.radical * other.rational,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd(self.rational / other, self.radical / other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.rational == other.rational and self.radical == other.radical

    def __hash__(self):
        if self.radical == 0:
            return hash(self.rational)
        return hash((self.rational, self.radical))

    def is_zero(self) -> bool:
        return self.rational == 0 and self.radical == 0

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(2)``."""
        a, b = self.rational, self.radical
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # Opposite signs: compare a^2 with 2 b^2; the larger magnitude wins.
        if a * a == 2 * b * b:
            return 0
        dominant_rational = a * a > 2 * b * b
        if a > 0:
            return 1 if dominant_rational else -1
        return -1 if dominant_rational else 1

    def __float__(self):
        return float(self.rational) + float(self.radical) * _SQRT2

    def __repr__(self):
        if self.radical == 0:
            return f"Surd({self.rational})"
        return f"Surd({self.rational}, {self.radical})"


Scalar = int | Fraction | Surd


def as_fraction_pair(value: Scalar) -> tuple[Fraction, Fraction]:
    if isinstance(value, Surd):
        return value.rational, value.radical
    return Fraction(value), Fraction(0)


def is_rational(value: Scalar) -> bool:
    return not isinstance(value, Surd) or value.radical == 0


def is_integer(value: Scalar) -> bool:
    a, b = as_fraction_pair(value)
    return b == 0 and a.denominator == 1


def sign_of(value: Scalar) -> int:
    if isinstance(value, Surd):
        return value.sign()
    return (value > 0) - (value < 0)


def to_float(value: Scalar) -> float:
    return float(value)


def simplify(value: Scalar) -> Scalar:
    """Collapse a rational ``Surd`` back to a ``Fraction``."""
    if isinstance(value, Surd) and value.radical == 0:
        return value.rational
    return value
