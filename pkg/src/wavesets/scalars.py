"""Exact scalars: rational multiples of pi, and the quadratic field Q(sqrt 2).

Every number in this library is one of two kinds.  Frequency-axis
quantities (interval endpoints, measures, translation offsets) are
rational multiples of pi, kept as a single Fraction coefficient so that
ordering, addition and rational scaling are exact.  Wavelet coefficients
live in Q(sqrt 2), which is closed under the products required by the
unitarity checks.  The two kinds never mix: a product of two RPi values
would leave the field and is deliberately unsupported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Rational = int | Fraction


def ints_strictly_between(lo: Fraction, hi: Fraction) -> range:
    """Integers k with lo < k < hi."""
    return range(math.floor(lo) + 1, math.ceil(hi))


def ints_in_halfopen(lo: Fraction, hi: Fraction) -> range:
    """Integers k with lo <= k < hi."""
    return range(math.ceil(lo), math.ceil(hi))


@dataclass(frozen=True, order=True)
class RPi:
    """The real number ``coef * pi`` with ``coef`` rational.

    Ordering, equality and hashing follow the real value.  Arithmetic is
    closed under addition, negation and scaling by rationals; scaling by
    another RPi is a type error by design.
    """

    coef: Fraction

    def __post_init__(self):
        if not isinstance(self.coef, Fraction):
            object.__setattr__(self, "coef", Fraction(self.coef))

    @classmethod
    def of(cls, num: Rational, den: Rational = 1) -> "RPi":
        """The value (num/den) * pi."""
        return cls(Fraction(num, den))

    @property
    def num(self) -> int:
        return self.coef.numerator

    @property
    def den(self) -> int:
        return self.coef.denominator

    def __add__(self, other: "RPi") -> "RPi":
        if not isinstance(other, RPi):
            return NotImplemented
        return RPi(self.coef + other.coef)

    def __sub__(self, other: "RPi") -> "RPi":
        if not isinstance(other, RPi):
            return NotImplemented
        return RPi(self.coef - other.coef)

    def __neg__(self) -> "RPi":
        return RPi(-self.coef)

    def __mul__(self, q: Rational) -> "RPi":
        if isinstance(q, RPi):
            raise TypeError("pi*pi products leave the scalar field")
        if not isinstance(q, (int, Fraction)):
            return NotImplemented
        return RPi(self.coef * q)

    __rmul__ = __mul__

    def __truediv__(self, q: Rational) -> "RPi":
        if not isinstance(q, (int, Fraction)):
            return NotImplemented
        return RPi(self.coef / q)

    def __bool__(self) -> bool:
        return self.coef != 0

    def __float__(self) -> float:
        return float(self.coef) * math.pi

    def __str__(self) -> str:
        c = self.coef
        if c == 0:
            return "0"
        num = "pi" if c.numerator == 1 else "-pi" if c.numerator == -1 else f"{c.numerator}pi"
        return num if c.denominator == 1 else f"{num}/{c.denominator}"

    def to_json(self) -> dict:
        return {"num": self.num, "den": self.den}

    @classmethod
    def from_json(cls, obj: dict) -> "RPi":
        return cls(Fraction(int(obj["num"]), int(obj["den"])))


RPI_ZERO = RPi.of(0)
PI = RPi.of(1)
TWO_PI = RPi.of(2)


def _frac_json(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator}


def _frac_from_json(obj: dict) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


@dataclass(frozen=True)
class QSqrt2:
    """An element a + b*sqrt(2) of the field Q(sqrt 2)."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        if not isinstance(self.a, Fraction):
            object.__setattr__(self, "a", Fraction(self.a))
        if not isinstance(self.b, Fraction):
            object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def of(cls, a: Rational, b: Rational = 0) -> "QSqrt2":
        return cls(Fraction(a), Fraction(b))

    @classmethod
    def zero(cls) -> "QSqrt2":
        return cls(Fraction(0), Fraction(0))

    @classmethod
    def one(cls) -> "QSqrt2":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def half_sqrt2(cls) -> "QSqrt2":
        """sqrt(2)/2, i.e. 1/sqrt(2)."""
        return cls(Fraction(0), Fraction(1, 2))

    @property
    def is_zero(self) -> bool:
        # sqrt(2) irrational: a + b*sqrt2 = 0 iff a = b = 0
        return self.a == 0 and self.b == 0

    def __add__(self, other: "QSqrt2") -> "QSqrt2":
        if not isinstance(other, QSqrt2):
            return NotImplemented
        return QSqrt2(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QSqrt2") -> "QSqrt2":
        if not isinstance(other, QSqrt2):
            return NotImplemented
        return QSqrt2(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QSqrt2":
        return QSqrt2(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, QSqrt2):
            return QSqrt2(self.a * other.a + 2 * self.b * other.b,
                          self.a * other.b + self.b * other.a)
        if isinstance(other, (int, Fraction)):
            return QSqrt2(self.a * other, self.b * other)
        return NotImplemented

    __rmul__ = __mul__

    def galois_conj(self) -> "QSqrt2":
        """The conjugate a - b*sqrt(2)."""
        return QSqrt2(self.a, -self.b)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(2)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt2"

    def to_json(self) -> dict:
        return {"a": _frac_json(self.a), "b": _frac_json(self.b)}

    @classmethod
    def from_json(cls, obj: dict) -> "QSqrt2":
        return cls(_frac_from_json(obj["a"]), _frac_from_json(obj["b"]))


@dataclass(frozen=True)
class ComplexQSqrt2:
    """A complex number with real and imaginary parts in Q(sqrt 2)."""

    re: QSqrt2
    im: QSqrt2

    @classmethod
    def real(cls, q: QSqrt2 | Rational) -> "ComplexQSqrt2":
        if not isinstance(q, QSqrt2):
            q = QSqrt2.of(q)
        return cls(q, QSqrt2.zero())

    @classmethod
    def zero(cls) -> "ComplexQSqrt2":
        return cls(QSqrt2.zero(), QSqrt2.zero())

    @classmethod
    def one(cls) -> "ComplexQSqrt2":
        return cls(QSqrt2.one(), QSqrt2.zero())

    @property
    def is_zero(self) -> bool:
        return self.re.is_zero and self.im.is_zero

    def __add__(self, other: "ComplexQSqrt2") -> "ComplexQSqrt2":
        if not isinstance(other, ComplexQSqrt2):
            return NotImplemented
        return ComplexQSqrt2(self.re + other.re, self.im + other.im)

    def __neg__(self) -> "ComplexQSqrt2":
        return ComplexQSqrt2(-self.re, -self.im)

    def __mul__(self, other: "ComplexQSqrt2") -> "ComplexQSqrt2":
        if not isinstance(other, ComplexQSqrt2):
            return NotImplemented
        return ComplexQSqrt2(self.re * other.re - self.im * other.im,
                             self.re * other.im + self.im * other.re)

    def conjugate(self) -> "ComplexQSqrt2":
        return ComplexQSqrt2(self.re, -self.im)

    def abs2(self) -> QSqrt2:
        """Squared modulus, a real element of Q(sqrt 2)."""
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        if self.im.is_zero:
            return str(self.re)
        return f"({self.re}) + ({self.im})i"

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "ComplexQSqrt2":
        return cls(QSqrt2.from_json(obj["re"]), QSqrt2.from_json(obj["im"]))
