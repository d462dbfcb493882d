"""Exact arithmetic in Q(i, sqrt(d)).

A :class:`Scalar` is ``a + b*i + c*sqrt(d) + e*i*sqrt(d)`` with rational
``a, b, c, e``.  Arithmetic results that happen to be rational collapse to
:class:`fractions.Fraction`, so code that mostly lives in Q never pays for
the four-component representation.  Plain ``int``/``Fraction`` values mix
freely with scalars.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .groups import squarefree_part


class ScalarDomainError(ValueError):
    """Two scalars with different square-free radicands were combined."""


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Scalar:
    __slots__ = ("a", "b", "c", "e", "d")

    def __init__(self, a=0, b=0, c=0, e=0, d: int = 1):
        a, b, c, e = _q(a), _q(b), _q(c), _q(e)
        if d < 1:
            raise ValueError("radicand must be positive")
        if d > 1:
            k, d = squarefree_part(d)
            c, e = c * k, e * k
        if d == 1:
            a, b, c, e = a + c, b + e, Fraction(0), Fraction(0)
        if c == 0 and e == 0:
            d = 1
        self.a, self.b, self.c, self.e, self.d = a, b, c, e, d

    # -- construction helpers
    @staticmethod
    def sqrt(n: int) -> "Scalar | Fraction":
        """Exact square root of a positive integer."""
        k, d = squarefree_part(n)
        return _collapse(Scalar(0, 0, k, 0, d)) if d > 1 else Fraction(k)

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(x)
        if isinstance(x, complex) or isinstance(x, float):
            raise TypeError("floats cannot be coerced to exact scalars")
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    # -- predicates
    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0 and self.e == 0

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.e)

    def _radicand(self, other: "Scalar") -> int:
        if self.d == other.d or other.d == 1:
            return self.d
        if self.d == 1:
            return other.d
        raise ScalarDomainError(f"radicands {self.d} and {other.d} do not mix")

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return _collapse(Scalar(self.a + other, self.b, self.c, self.e, self.d))
            return NotImplemented
        d = self._radicand(other)
        return _collapse(Scalar(self.a + other.a, self.b + other.b, self.c + other.c, self.e + other.e, d))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b, -self.c, -self.e, self.d)

    def __sub__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return _collapse(Scalar(self.a * other, self.b * other, self.c * other, self.e * other, self.d))
            return NotImplemented
        d = self._radicand(other)
        a1, b1, c1, e1 = self.a, self.b, self.c, self.e
        a2, b2, c2, e2 = other.a, other.b, other.c, other.e
        # basis 1, i, s, is with i^2 = -1, s^2 = d
        a = a1 * a2 - b1 * b2 + d * (c1 * c2 - e1 * e2)
        b = a1 * b2 + b1 * a2 + d * (c1 * e2 + e1 * c2)
        c = a1 * c2 + c1 * a2 - b1 * e2 - e1 * b2
        e = a1 * e2 + e1 * a2 + b1 * c2 + c1 * b2
        return _collapse(Scalar(a, b, c, e, d))

    __rmul__ = __mul__

    def conjugate(self):
        """Complex conjugation: fixes ``a, c``, negates ``b, e``."""
        return Scalar(self.a, -self.b, self.c, -self.e, self.d)

    def inv(self):
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        d = self.d
        # x = p + q i with p = a + c s, q = b + e s;  1/x = (p - q i) / (p^2 + q^2)
        a, b, c, e = self.a, self.b, self.c, self.e
        r = a * a + d * c * c + b * b + d * e * e
        s = 2 * (a * c + b * e)
        # 1/(r + s sqrt(d)) = (r - s sqrt(d)) / (r^2 - d s^2)
        den = r * r - d * s * s
        if den == 0:
            raise ZeroDivisionError("degenerate norm")  # unreachable for square-free d > 1
        return Scalar(a, -b, c, -e, d) * Scalar(r / den, 0, -s / den, 0, d)

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return self * other.inv()
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return NotImplemented

    def __rtruediv__(self, other):
        return other * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        r = Fraction(1)
        base = self
        while k:
            if k & 1:
                r = r * base
            base = base * base
            k >>= 1
        return r

    # -- comparison
    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.c == 0 and other.e == 0 and self.c == 0 and self.e == 0:
                return self.a == other.a and self.b == other.b
            return (self.a, self.b, self.c, self.e, self.d) == (other.a, other.b, other.c, other.e, other.d)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.a)
        return hash((self.a, self.b, self.c, self.e, self.d))

    def __complex__(self):
        s = math.sqrt(self.d)
        return complex(float(self.a) + float(self.c) * s, float(self.b) + float(self.e) * s)

    def __repr__(self):
        return f"Scalar({format_scalar(self)})"

    __str__ = lambda self: format_scalar(self)  # noqa: E731


def _collapse(x):
    if isinstance(x, Scalar) and x.is_rational():
        return x.a
    return x


I = Scalar(0, 1)


def conj(x):
    if isinstance(x, Scalar):
        return x.conjugate()
    if isinstance(x, complex):
        return x.conjugate()
    return x


def inv(x):
    if isinstance(x, Scalar):
        return x.inv()
    if x == 0:
        raise ZeroDivisionError("inverse of zero scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(1) / x
    return 1 / x


def to_complex(x) -> complex:
    return complex(x)


def sqrt(n: int):
    return Scalar.sqrt(n)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Scalar))


# ---------------------------------------------------------------- text form


def _fmt_q(x: Fraction) -> str:
    x = _q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Render as ``a+bi+c√d+ei√d`` with zero parts omitted and rationals as ``p/q``."""
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, (int, Fraction)):
        return _fmt_q(x)
    if not isinstance(x, Scalar):
        raise TypeError(f"not an exact scalar: {x!r}")
    parts = []
    for coef, unit in ((x.a, ""), (x.b, "i"), (x.c, f"√{x.d}"), (x.e, f"i√{x.d}")):
        if coef == 0:
            continue
        if unit and abs(coef) == 1:
            body = unit
        else:
            body = _fmt_q(abs(coef)) + unit
        sign = "-" if coef < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(i)?(?:√(\d+))?")


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    pos = 0
    acc = Fraction(0)
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad scalar {text!r} at {pos}")
        sign, num, iu, rad = m.groups()
        if num is None and iu is None and rad is None:
            raise ValueError(f"bad scalar {text!r} at {pos}")
        coef = Fraction(num) if num else Fraction(1)
        if sign == "-":
            coef = -coef
        term = coef
        if iu:
            term = term * I
        if rad:
            term = term * Scalar(0, 0, 1, 0, int(rad))
        acc = acc + term
        pos = m.end()
    return acc
