"""Exact degrees in [0, 1] and their decimal rendering."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

ZERO = Fraction(0)
ONE = Fraction(1)


def as_degree(value, *, check: bool = True) -> Fraction:
    """Convert ``value`` to an exact rational degree.

    Strings are read exactly (``"0.76"`` is 19/25, ``"2/5"`` is 2/5). Floats go
    through their shortest repr so that ``0.1`` means one tenth.
    """
    if isinstance(value, Fraction):
        result = value
    elif isinstance(value, (int, Rational)):
        result = Fraction(value)
    elif isinstance(value, float):
        result = Fraction(repr(value))
    elif isinstance(value, str):
        try:
            result = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a degree literal: {value!r}") from None
    else:
        raise TypeError(f"cannot read a degree from {type(value).__name__}")
    if check and not ZERO <= result <= ONE:
        raise ValueError(f"degree {value!r} outside [0, 1]")
    return result


def is_finite_decimal(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def format_decimal(q: Fraction, max_digits: int = 12) -> str:
    """Render ``q`` as a decimal string.

    Exact when the expansion terminates; otherwise cut after ``max_digits``
    fractional digits and suffixed with ``...``.
    """
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, rem = divmod(q.numerator, q.denominator)
    digits = []
    while rem and len(digits) < max_digits:
        rem *= 10
        digit, rem = divmod(rem, q.denominator)
        digits.append(str(digit))
    text = f"{sign}{whole}"
    if digits:
        text += "." + "".join(digits)
    if rem:
        text += "..."
    return text


def format_degree(q: Fraction) -> str:
    """Short literal that reads back to the same rational."""
    if is_finite_decimal(q):
        return format_decimal(q)
    return f"{q.numerator}/{q.denominator}"
