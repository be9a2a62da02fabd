"""Parsing and rendering of exact rationals."""

from fractions import Fraction
from numbers import Rational


def to_fraction(value):
    """Convert ``value`` to a :class:`~fractions.Fraction` without loss.

    Accepts ints, Fractions, strings such as ``"3/8"`` or ``"0.1"`` and
    floats (read through their shortest repr, so ``0.1`` becomes ``1/10``).

    >>> to_fraction("3/8")
    Fraction(3, 8)
    >>> to_fraction(0.1)
    Fraction(1, 10)
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not payoffs or probabilities")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


def fraction_vector(values):
    return tuple(to_fraction(v) for v in values)


def fraction_matrix(rows):
    return tuple(fraction_vector(row) for row in rows)


def render(value, as_float=False):
    """Render a number as ``"a/b"`` (or 12 significant digits with ``as_float``)."""
    if as_float or isinstance(value, float):
        return format(float(value), ".12g")
    return str(to_fraction(value))


def render_vector(values, as_float=False):
    return [render(v, as_float) for v in values]


def is_exact(value):
    return isinstance(value, Rational)
