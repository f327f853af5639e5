"""Exact rational scalars and their JSON string form.

All scalar quantities in the toolkit are `fractions.Fraction` values: the
stdlib type already stores lowest terms with a positive denominator over
arbitrary-precision integers, which is exactly the invariant we need.
Rationals are serialized as strings "num/den" ("num" when den == 1) so that
JSON round-trips stay exact.
"""

from __future__ import annotations

from fractions import Fraction

Rat = Fraction


def rat(value) -> Fraction:
    """Coerce ints, strings like "3/4", and Fractions to an exact Rat."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot make an exact rational from {value!r}")


def rat_str(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rat_decimal(value: Fraction, places: int = 12) -> str:
    """Fixed-point decimal rendering with exactly `places` digits.

    Rounding is half-away-from-zero on the scaled integer, computed exactly;
    this is the only place the toolkit converts rationals to decimals.
    """
    value = Fraction(value)
    scale = 10 ** places
    scaled = value * scale
    num, den = scaled.numerator, scaled.denominator
    sign = "-" if num < 0 else ""
    num = abs(num)
    q, r = divmod(num, den)
    if 2 * r >= den:
        q += 1
    whole, frac = divmod(q, scale)
    return f"{sign}{whole}.{frac:0{places}d}"
