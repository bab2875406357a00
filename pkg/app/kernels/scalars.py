"""
Coefficient scalars.

Three backends are used for the values of the generators:

- ``Fraction`` (the Rational backend): exact, always reduced with a positive denominator.
- ``QuadExt``: exact elements a + b*sqrt(d) of a quadratic field, d squarefree.
- ``NumComplex``: complex doubles carrying a first-order forward error bound ``eps``.

Every scalar supports + - * / with ints and Fractions on either side, so the generic
matrix code in ``matrices.py`` never needs to know which backend it is running on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from app.core.errors import NumericallyIndeterminate
import app_constants

# unit roundoff for IEEE doubles
UNIT_ROUNDOFF = 2.0 ** -53

Rational = Fraction
Exact = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, QuadExt) and value.b == 0:
        return value.a
    raise TypeError(f"cannot read {value!r} as an exact rational")


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n = k^2 * m with m squarefree; returns (k, m). The sign stays on m."""
    if n == 0:
        raise ValueError("zero has no squarefree part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    k, m = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            m *= p
        p += 1
    return k, sign * m * n


def is_squarefree(n: int) -> bool:
    return n != 0 and squarefree_part(n)[0] == 1


# =============================
# Quadratic extension
# =============================
@dataclass(frozen=True)
class QuadExt:
    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if self.d in (0, 1) or not is_squarefree(self.d):
            raise ValueError(f"QuadExt needs a squarefree d other than 0 and 1, got {self.d}")

    @classmethod
    def sqrt(cls, d: int) -> "QuadExt":
        return cls(Fraction(0), Fraction(1), d)

    def _lift(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"mixing Q(sqrt {self.d}) with Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in QuadExt")
        num = self * o.conjugate()
        return QuadExt(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        result = QuadExt(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def to_complex(self) -> complex:
        if self.d > 0:
            return complex(float(self.a) + float(self.b) * math.sqrt(self.d), 0.0)
        return complex(float(self.a), float(self.b) * math.sqrt(-self.d))

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.d})"


# =============================
# Error-tracked complex doubles
# =============================
@dataclass(frozen=True, eq=False)
class NumComplex:
    re: float
    im: float = 0.0
    eps: float = 0.0

    @classmethod
    def lift(cls, value) -> "NumComplex":
        if isinstance(value, NumComplex):
            return value
        if isinstance(value, (int, Fraction)):
            x = float(value)
            exact = Fraction(x) == value
            return cls(x, 0.0, 0.0 if exact else abs(x) * UNIT_ROUNDOFF)
        if isinstance(value, QuadExt):
            z = value.to_complex()
            return cls(z.real, z.imag, 4 * UNIT_ROUNDOFF * abs(z))
        if isinstance(value, complex):
            return cls(value.real, value.imag, 0.0)
        if isinstance(value, float):
            return cls(value, 0.0, 0.0)
        return NotImplemented

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def _round(self, z: complex, err: float, ulps: float) -> "NumComplex":
        return NumComplex(z.real, z.imag, err + ulps * UNIT_ROUNDOFF * abs(z))

    def __add__(self, other):
        o = NumComplex.lift(other)
        if o is NotImplemented:
            return o
        return self._round(self.value + o.value, self.eps + o.eps, 2)

    __radd__ = __add__

    def __neg__(self):
        return NumComplex(-self.re, -self.im, self.eps)

    def __sub__(self, other):
        o = NumComplex.lift(other)
        if o is NotImplemented:
            return o
        return self._round(self.value - o.value, self.eps + o.eps, 2)

    def __rsub__(self, other):
        o = NumComplex.lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = NumComplex.lift(other)
        if o is NotImplemented:
            return o
        err = abs(self) * o.eps + abs(o) * self.eps + self.eps * o.eps
        return self._round(self.value * o.value, err, 4)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = NumComplex.lift(other)
        if o is NotImplemented:
            return o
        if abs(o) <= o.eps or abs(o) == 0.0:
            raise NumericallyIndeterminate(f"division by a value indistinguishable from zero ({o})")
        q = self.value / o.value
        err = (self.eps + abs(q) * o.eps) / (abs(o) - o.eps)
        return self._round(q, err, 6)

    def __rtruediv__(self, other):
        o = NumComplex.lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        result = NumComplex(1.0)
        base = self if k >= 0 else 1 / self
        for _ in range(abs(k)):
            result = result * base
        return result

    def conjugate(self) -> "NumComplex":
        return NumComplex(self.re, -self.im, self.eps)

    def is_zero(self, floor: float = app_constants.NUMERIC_ZERO_FLOOR) -> bool:
        return abs(self) <= max(self.eps, floor)

    def __eq__(self, other):
        o = NumComplex.lift(other)
        if o is NotImplemented:
            return o
        return (self - o).is_zero()

    # tolerance equality is not transitive; unhashable
    __hash__ = None

    def __str__(self):
        return f"{self.re:.15g}{self.im:+.15g}j(+-{self.eps:.1e})"


# =============================
# Backend-agnostic helpers
# =============================
Scalar = Union[int, Fraction, QuadExt, NumComplex]


def is_zero(value: Scalar, floor: float = app_constants.NUMERIC_ZERO_FLOOR) -> bool:
    if isinstance(value, NumComplex):
        return value.is_zero(floor)
    if isinstance(value, QuadExt):
        return value.is_zero()
    return value == 0


def magnitude(value: Scalar) -> float:
    if isinstance(value, NumComplex):
        return abs(value)
    if isinstance(value, QuadExt):
        return abs(value.to_complex())
    return abs(float(value))


def error_bound(value: Scalar) -> float:
    return value.eps if isinstance(value, NumComplex) else 0.0


def backend_of(value: Scalar) -> str:
    if isinstance(value, NumComplex):
        return "numeric"
    if isinstance(value, QuadExt):
        return "quadratic"
    return "rational"


def to_string(value: Scalar) -> str:
    """Serialize a scalar: rationals as "p/q", the other backends in their own notation."""
    if isinstance(value, (int, Fraction)):
        f = Fraction(value)
        return f"{f.numerator}/{f.denominator}"
    if isinstance(value, QuadExt):
        if value.b == 0:
            return to_string(value.a)
        return f"{to_string(value.a)} + {to_string(value.b)}*sqrt({value.d})"
    return f"{value.re:.17g}{value.im:+.17g}j"
