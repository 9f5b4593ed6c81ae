from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ccbox.errors import ApproxUnsound
from ccbox.lp import approx_hull_membership, exact_hull_membership, exact_phase_one

SQUARE = [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_phase_one_feasible():
    status, w = exact_phase_one([[1, 1, 0], [0, 1, 1]], [2, 3])
    assert status == "feasible"
    x = [w.get(j, 0) for j in range(3)]
    assert x[0] + x[1] == 2 and x[1] + x[2] == 3


def test_phase_one_farkas():
    A, b = [[1, 1], [1, 1]], [1, 2]
    status, y = exact_phase_one(A, b)
    assert status == "infeasible"
    assert all(sum(y[i] * A[i][j] for i in range(2)) <= 0 for j in range(2))
    assert sum(y[i] * b[i] for i in range(2)) > 0


def test_hull_inside_and_outside():
    res = exact_hull_membership(SQUARE, [Fraction(1, 3), Fraction(1, 2)])
    assert res.feasible and sum(res.weights.values()) == 1
    res = exact_hull_membership(SQUARE, [Fraction(3, 2), Fraction(1, 2)])
    assert not res.feasible
    c, h = res.witness
    assert all(sum(ci * vi for ci, vi in zip(c, v)) <= h for v in SQUARE)
    assert c[0] * Fraction(3, 2) + c[1] * Fraction(1, 2) > h


def test_boundary_point_is_inside():
    assert exact_hull_membership(SQUARE, [1, Fraction(1, 7)]).feasible


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=8),
       st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6)), st.integers(1, 4))
def test_guided_agrees_with_pure_simplex(V, t, d):
    t = [Fraction(v, d) for v in t]
    a = exact_hull_membership(V, t, guided=True)
    b = exact_hull_membership(V, t, guided=False)
    assert a.feasible == b.feasible


def test_approx_bands():
    V = np.array(SQUARE, dtype=float)
    assert approx_hull_membership(V, np.array([1 + 1e-10, 0.5]), 1e-9).feasible
    assert not approx_hull_membership(V, np.array([1.1, 0.5]), 1e-9).feasible
    with pytest.raises(ApproxUnsound):
        approx_hull_membership(V, np.array([1 + 5e-9, 0.5]), 1e-9)
