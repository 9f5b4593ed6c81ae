"""Exact rationals and tolerance-carrying floats.

Exact values are plain :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Irrational quantities are :class:`Approx` values that
carry an absolute error bound which is propagated through arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import AmbiguousBoundary

DEFAULT_TOL = 1e-9
# Approximate comparisons: "within tolerance" is treated as satisfying a
# constraint; a violation is only asserted beyond MARGIN * tol.
MARGIN = 10.0


@dataclass(frozen=True)
class Approx:
    value: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"Approx tolerance must be positive, got {self.tol!r}")

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"Approx({self.value!r}, tol={self.tol:.3g})"

    def __neg__(self):
        return Approx(-self.value, self.tol)

    def __abs__(self):
        return Approx(abs(self.value), self.tol)

    def __add__(self, other):
        if isinstance(other, Approx):
            return Approx(self.value + other.value, self.tol + other.tol)
        if isinstance(other, (int, Rational, float)):
            return Approx(self.value + float(other), self.tol)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Approx):
            tol = abs(self.value) * other.tol + abs(other.value) * self.tol + self.tol * other.tol
            return Approx(self.value * other.value, tol)
        if isinstance(other, (int, Rational, float)):
            f = float(other)
            return Approx(self.value * f, max(abs(f) * self.tol, 1e-300))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Approx):
            lo = abs(other.value) - other.tol
            if lo <= 0:
                raise AmbiguousBoundary(f"division by {other!r}, which may be zero")
            q = self.value / other.value
            return Approx(q, (self.tol + abs(q) * other.tol) / lo)
        if isinstance(other, (int, Rational, float)):
            f = float(other)
            return Approx(self.value / f, self.tol / abs(f))
        return NotImplemented

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Rational, float)):
            return NotImplemented
        lo = abs(self.value) - self.tol
        if lo <= 0:
            raise AmbiguousBoundary(f"division by {self!r}, which may be zero")
        f = float(other)
        return Approx(f / self.value, max(abs(f) * self.tol / (lo * abs(self.value)), 1e-300))

    def sqrt(self) -> Approx:
        lo = self.value - self.tol
        if lo <= 0:
            raise AmbiguousBoundary(f"sqrt of {self!r}, which may be nonpositive")
        r = math.sqrt(self.value)
        return Approx(r, self.tol / (2 * math.sqrt(lo)))


Scalar = Union[Fraction, Approx]


def is_exact(x) -> bool:
    return not isinstance(x, (Approx, float))


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings exactly.  Floats are rejected."""
    if isinstance(x, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def to_float(x) -> float:
    return float(x.value) if isinstance(x, Approx) else float(x)


def compare(x, threshold) -> int:
    """Sign of ``x - threshold``; 0 means "equal within tolerance".

    Approximate values within ``tol`` of the threshold compare equal; values
    between ``tol`` and ``MARGIN * tol`` away raise :class:`AmbiguousBoundary`.
    """
    if isinstance(x, Approx) or isinstance(threshold, Approx):
        diff = x - threshold
        if not isinstance(diff, Approx):
            diff = Approx(float(diff))
        if abs(diff.value) <= diff.tol:
            return 0
        if abs(diff.value) <= MARGIN * diff.tol:
            raise AmbiguousBoundary(
                f"value {to_float(x):.15g} is within {MARGIN:g} tolerances of {to_float(threshold):.15g}"
            )
        return 1 if diff.value > 0 else -1
    d = x - threshold
    return (d > 0) - (d < 0)


def exceeds(x, threshold) -> bool:
    """``x > threshold`` with the approximate-comparison rules of :func:`compare`."""
    return compare(x, threshold) > 0


def fmt(x) -> str:
    """Lossless text form: ``"p/q"`` for exact values, 17 significant digits otherwise."""
    if isinstance(x, Approx):
        return f"{x.value:.17g}"
    if isinstance(x, float):
        return f"{x:.17g}"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
