"""Exact complex-rational scalars, plus helpers shared with the float backend.

The rational backend stores a coefficient as a pair of ``fractions.Fraction``
values (real and imaginary part) and never loses information.  The float
backend uses Python ``complex``.  Code that must work with both goes through
the module-level helpers (:func:`conjugate_scalar`, :func:`magnitude`, ...)
instead of methods, so either type can flow through the series engine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

__all__ = [
    "ComplexRational",
    "Scalar",
    "ScalarLike",
    "conjugate_scalar",
    "magnitude",
    "format_rational",
    "parse_rational",
]


def format_rational(value: Fraction) -> str:
    """Render a Fraction as an explicit ``p/q`` string (``0/1`` for zero)."""
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse a ``p/q`` or integer string into a Fraction."""
    return Fraction(text.strip())


class ComplexRational:
    """An element of Q(i): exact rational real and imaginary parts.

    Instances are immutable and support field arithmetic, conjugation and an
    exact max-norm magnitude.  Mixed arithmetic with ``int`` and ``Fraction``
    is allowed; anything else raises ``TypeError`` so silent float
    contamination cannot happen in rational mode.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("ComplexRational is immutable")

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------

    @classmethod
    def from_value(cls, value: "ScalarLike") -> "ComplexRational":
        """Coerce an int, Fraction, ``p/q`` string, pair, or instance."""
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, str):
            return cls(parse_rational(value))
        if isinstance(value, tuple) and len(value) == 2:
            return cls(Fraction(value[0]), Fraction(value[1]))
        raise TypeError(f"cannot build ComplexRational from {value!r}")

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other: object) -> "ComplexRational | None":
        if isinstance(other, ComplexRational):
            return other
        if isinstance(other, (int, Fraction)):
            return ComplexRational(other)
        return None

    def __add__(self, other: object) -> "ComplexRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: object) -> "ComplexRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: object) -> "ComplexRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other: object) -> "ComplexRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.im == 0 and o.im == 0:
            return ComplexRational(self.re * o.re)
        return ComplexRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "ComplexRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.re == 0 and o.im == 0:
            raise ZeroDivisionError("division by zero ComplexRational")
        if self.im == 0 and o.im == 0:
            return ComplexRational(self.re / o.re)
        norm = o.re * o.re + o.im * o.im
        return ComplexRational(
            (self.re * o.re + self.im * o.im) / norm,
            (self.im * o.re - self.re * o.im) / norm,
        )

    def __rtruediv__(self, other: object) -> "ComplexRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int) -> "ComplexRational":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative int")
        result = ComplexRational(1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    # ------------------------------------------------------------------
    # predicates and conversions
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def magnitude(self) -> Fraction:
        """Exact max-norm ``max(|re|, |im|)``, suitable for residual reports."""
        return max(abs(self.re), abs(self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}*i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}*i)"


ComplexRational.ZERO = ComplexRational(0)
ComplexRational.ONE = ComplexRational(1)
ComplexRational.I = ComplexRational(0, 1)

#: A series coefficient in either backend.
Scalar = Union[ComplexRational, complex]

#: Anything the coercion helpers accept.
ScalarLike = Union[ComplexRational, complex, int, float, Fraction, str, tuple]


def conjugate_scalar(value: Scalar) -> Scalar:
    """Complex conjugation for either backend."""
    return value.conjugate()


def magnitude(value: Scalar) -> "Fraction | float":
    """Max-norm magnitude: exact Fraction in rational mode, float otherwise."""
    if isinstance(value, ComplexRational):
        return value.magnitude()
    return max(abs(value.real), abs(value.imag))
