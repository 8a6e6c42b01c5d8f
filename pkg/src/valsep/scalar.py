"""Extended nonnegative rationals: :class:`fractions.Fraction` plus ``INF``.

Finite scalars are plain ``Fraction`` objects.  ``INF`` absorbs addition and
multiplication by nonzero values, and ``0 * INF == 0``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import PreconditionError


class _Infinity:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self):
        return hash("valsep.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        _check_operand(other)
        return self

    __radd__ = __add__

    def __mul__(self, other):
        _check_operand(other)
        if other == 0:
            return Fraction(0)
        return self

    __rmul__ = __mul__

    def __sub__(self, other):
        if other is self:
            raise PreconditionError("inf - inf is undefined")
        _check_operand(other)
        return self

    def __rsub__(self, other):
        raise PreconditionError("cannot subtract inf from a finite value")


def _check_operand(other):
    if not (other is INF or isinstance(other, (int, Fraction))):
        raise TypeError(f"unsupported scalar operand {other!r}")
    if other is not INF and other < 0:
        raise PreconditionError(f"negative scalar {other}")


INF = _Infinity()

Scalar = Union[Fraction, _Infinity]


def scalar(value) -> Scalar:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``"inf"`` to a scalar."""
    if value is INF:
        return INF
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity", "∞"):
            return INF
        out = Fraction(text)
    elif isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    elif isinstance(value, (int, Fraction)):
        out = Fraction(value)
    else:
        raise TypeError(f"cannot convert {value!r} to an exact scalar")
    if out < 0:
        raise PreconditionError(f"scalars are nonnegative, got {out}")
    return out


def rational(value) -> Fraction:
    """Coerce to a (possibly negative) exact rational; floats are rejected."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def is_finite(x: Scalar) -> bool:
    return x is not INF


def sub(a: Scalar, b: Scalar) -> Scalar:
    """Truncation-free subtraction: defined only for finite ``b <= a``."""
    if b is INF:
        raise PreconditionError("cannot subtract inf")
    if b > a:
        raise PreconditionError(f"{a} - {b} would be negative")
    return a - b


def fmt(x: Scalar) -> str:
    """Serialize as ``"p/q"``, ``"n"`` or ``"inf"``."""
    return "inf" if x is INF else str(Fraction(x))
