from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ccbox.errors import AmbiguousBoundary
from ccbox.scalar import Approx, as_fraction, compare, fmt


def test_as_fraction_parses_strings_and_rejects_floats():
    assert as_fraction("3/8") == Fraction(3, 8)
    assert as_fraction(2) == 2
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)


def test_compare_exact():
    assert compare(Fraction(1, 3), Fraction(1, 3)) == 0
    assert compare(Fraction(1, 2), Fraction(1, 3)) == 1


def test_compare_bands():
    assert compare(Approx(2.0 + 5e-10, 1e-9), 2) == 0
    assert compare(Approx(2.0 + 1e-6, 1e-9), 2) == 1
    with pytest.raises(AmbiguousBoundary):
        compare(Approx(2.0 + 5e-9, 1e-9), 2)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_approx_arithmetic_contains_truth(a, b):
    x, y = Approx(a, 1e-9), Approx(b, 1e-9)
    assert abs((x + y).value - (a + b)) <= (x + y).tol
    assert (x * y).tol >= 0


def test_sqrt_and_division():
    r = Approx(2.0, 1e-12).sqrt()
    assert abs(r.value - 2 ** 0.5) < 1e-15
    with pytest.raises(AmbiguousBoundary):
        Approx(1.0) / Approx(0.0, 1e-9)


def test_fmt_is_lossless():
    assert fmt(Fraction(-3, 4)) == "-3/4"
    assert fmt(Fraction(5)) == "5"
    v = 0.1 + 0.2
    assert float(fmt(v)) == v
