"""Exact rational weights and the +infinity cost symbol.

Weights are kept as ``int`` when integral and ``fractions.Fraction``
otherwise. Both are exact, compare correctly with each other, and ints keep
the hot loops fast.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

Weight = Union[int, Fraction]


class _Infinity:
    """The effective cost of a cyclic play: larger than every rational."""

    _instance: _Infinity | None = None

    def __new__(cls) -> _Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self) -> int:
        return hash("spgames.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if other is self or isinstance(other, Rational):
            return False
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if other is self:
            return True
        if isinstance(other, Rational):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, Rational):
            return True
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if other is self or isinstance(other, Rational):
            return True
        return NotImplemented

    def __add__(self, other: object) -> _Infinity:
        if other is self or isinstance(other, Rational):
            return self
        return NotImplemented

    __radd__ = __add__


INF = _Infinity()
Cost = Union[int, Fraction, _Infinity]


def rational(value: int | Fraction | str) -> Weight:
    """Coerce to a canonical exact weight.

    Accepts ints, Fractions and strings like ``"3"`` or ``"-7/4"``. Floats are
    rejected so that no rounding can sneak into the engine.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a weight")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not a rational string: {value!r}")
        return rational(Fraction(text))
    raise TypeError(f"cannot use {type(value).__name__} as an exact weight")


def format_rational(value: Weight) -> str:
    """Canonical ``p/q`` (or ``p``) text, the inverse of :func:`rational`."""
    value = rational(value)
    if isinstance(value, int):
        return str(value)
    return f"{value.numerator}/{value.denominator}"


def format_cost(value: Cost) -> str:
    return "inf" if value is INF else format_rational(value)
