"""Exact rational and rational-complex scalars.

All symbolic computation in this package runs over complex numbers whose
real and imaginary parts are exact rationals.  gmpy2 provides the fast
rational type when present; otherwise the stdlib Fraction is used with
identical semantics (reduced p/q form, exact arithmetic, str round-trip).
"""

from __future__ import annotations

from typing import Union

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rational

RationalLike = Union[int, str, "Rational"]

_ZERO = Rational(0)
_ONE = Rational(1)


def rational(numerator: RationalLike = 0, denominator: int = 1) -> Rational:
    """Build an exact rational; accepts ints, 'p/q' strings, rationals."""
    if denominator == 1:
        return Rational(numerator)
    return Rational(numerator, denominator)


def rational_to_str(q: Rational) -> str:
    """Reduced 'p/q' form ('p' when the denominator is 1)."""
    return str(q)


class RationalComplex:
    """Complex number with exact rational real and imaginary parts.

    Instances are treated as immutable values.  Arithmetic with plain
    ints and Rationals is supported and stays exact.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        self.re = re if type(re) is type(_ZERO) else Rational(re)
        self.im = im if type(im) is type(_ZERO) else Rational(im)

    # -- constructors ------------------------------------------------

    @staticmethod
    def from_strings(re: str, im: str) -> "RationalComplex":
        return RationalComplex(Rational(re), Rational(im))

    # -- predicates --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic --------------------------------------------------

    def __add__(self, other: "RationalComplex") -> "RationalComplex":
        return RationalComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "RationalComplex") -> "RationalComplex":
        return RationalComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "RationalComplex":
        return RationalComplex(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, RationalComplex):
            return RationalComplex(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        # rational or int scalar
        return RationalComplex(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "RationalComplex":
        # division by an exact real scalar only; full complex division
        # is never needed here
        if isinstance(scalar, RationalComplex):
            if scalar.im:
                raise TypeError("division only by real rational scalars")
            scalar = scalar.re
        return RationalComplex(self.re / scalar, self.im / scalar)

    def times_i(self) -> "RationalComplex":
        """Multiply by the imaginary unit."""
        return RationalComplex(-self.im, self.re)

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    # -- conversions -------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, type(_ZERO))):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"RationalComplex({self.re!s}, {self.im!s})"

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)


RC_ZERO = RationalComplex(0, 0)
RC_ONE = RationalComplex(1, 0)
RC_I = RationalComplex(0, 1)
