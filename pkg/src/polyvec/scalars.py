"""Exact scalar arithmetic: rationals and a nilpotent formal parameter.

All coefficients in the engine are exact.  The fast path is gmpy2.mpq;
fractions.Fraction is the fallback when gmpy2 is unavailable.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as QQ  # type: ignore
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ  # type: ignore

ZERO = QQ(0)
ONE = QQ(1)


def rational(num, den=1):
    """Exact rational from integers (or a rational-like value)."""
    return QQ(num, den) if den != 1 else QQ(num)


def is_rational(value) -> bool:
    return isinstance(value, type(ONE)) or isinstance(value, int)


class TScalar:
    """Element a + b*t of Q[t]/(t^2), for formal first-order parameters.

    Mixes freely with ints and rationals; t = TScalar(0, 1).
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = QQ(a)
        self.b = QQ(b)

    def __add__(self, other):
        other = _as_tscalar(other)
        if other is NotImplemented:
            return NotImplemented
        return TScalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_tscalar(other)
        if other is NotImplemented:
            return NotImplemented
        return TScalar(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return _as_tscalar(other).__sub__(self)

    def __mul__(self, other):
        other = _as_tscalar(other)
        if other is NotImplemented:
            return NotImplemented
        # t^2 = 0
        return TScalar(self.a * other.a, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def __neg__(self):
        return TScalar(-self.a, -self.b)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, TScalar):
            return self.a == other.a and self.b == other.b
        if is_rational(other):
            return self.b == 0 and self.a == QQ(other)
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __repr__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*t" if self.b != 1 else "t"
        return f"{self.a}+{self.b}*t"


T_PARAM = TScalar(0, 1)


def _as_tscalar(value):
    if isinstance(value, TScalar):
        return value
    if is_rational(value):
        return TScalar(value)
    try:
        return TScalar(QQ(value))
    except (TypeError, ValueError):
        return NotImplemented


def coeff_is_zero(c) -> bool:
    """Zero test that works for rationals, ints and TScalar alike."""
    return not c
