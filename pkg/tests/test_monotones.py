import math
from fractions import Fraction as F

import pytest
from hypothesis import given

from ccbox.box import T2222, BoxType, make_box
from ccbox.catalog import (hardy, l_empty, noisy_pr, pr_box, table3_mixture, tilt_beta, tilted,
                           tilted_m_chsh_formula, tilted_m_npr_formula, tsirelson)
from ccbox.box import enumerate_deterministic_boxes
from ccbox.errors import BadParameter, WrongType
from ccbox.free_ops import apply_det, enumerate_lso
from ccbox.monotones import (PlusInfinity, chsh_functional, constant_functional, m_chsh_closed,
                             m_chsh_oracle, m_npr_closed, m_npr_oracle, nonlocal_fraction,
                             npr_decomposition, robustness_general, robustness_local, tilted_chsh,
                             tilted_functional, yield_monotone)

from conftest import box_from_seed, seeds

LSO = enumerate_lso(T2222)


def test_chain_values():
    for a in (F(0), F(1, 5), F(1, 2), F(1)):
        assert m_chsh_closed(noisy_pr(a)) == 2 * a + 2
        assert m_npr_closed(noisy_pr(a)) == 2 * a + 2
    assert m_npr_oracle(noisy_pr(F(1, 2))) == 3


def test_table3_values():
    for i in (1, 2, 3):
        assert m_chsh_closed(table3_mixture(i)) == F(5, 2)
        assert m_npr_closed(table3_mixture(i)) == 3


def test_quantum_values():
    assert abs(float(m_chsh_closed(tsirelson())) - 2 * math.sqrt(2)) < 1e-9
    assert abs(float(m_npr_closed(tsirelson())) - 2 * math.sqrt(2)) < 1e-9
    assert abs(float(m_chsh_closed(hardy())) - 10 * (math.sqrt(5) - 2)) < 1e-9
    assert abs(float(m_npr_closed(hardy())) - 4) < 1e-9


def test_derived_measures():
    assert nonlocal_fraction(pr_box()) == 1
    assert robustness_local(pr_box()) == F(1, 3)
    assert robustness_general(pr_box()) == F(1, 4)
    assert nonlocal_fraction(l_empty()) == robustness_local(l_empty()) == robustness_general(l_empty()) == 0
    assert abs(float(nonlocal_fraction(tsirelson())) - (math.sqrt(2) - 1)) < 1e-9
    vals = [(robustness_local(noisy_pr(F(i, 10))), robustness_general(noisy_pr(F(i, 10)))) for i in range(1, 10)]
    assert all(a[0] < b[0] and a[1] < b[1] for a, b in zip(vals, vals[1:]))


@given(seeds)
def test_decomposition(seed):
    b = box_from_seed(seed, nonfree=True)
    dec = npr_decomposition(b)
    assert dec.reconstruct() == b
    if dec.boundary_box is not None:
        assert min(dec.boundary_box.flat) == 0
        from ccbox.box import chsh

        assert chsh(dec.boundary_box, dec.variant) == 2


@given(seeds)
def test_ranges_and_order(seed):
    b = box_from_seed(seed)
    mc, mn = m_chsh_closed(b), m_npr_closed(b)
    assert 2 <= mc <= mn <= 4


@given(seeds)
def test_chsh_oracle_exact(seed):
    b = box_from_seed(seed)
    assert m_chsh_closed(b) == m_chsh_oracle(b)


def test_npr_oracle_close(rng):
    from ccbox.box import random_box

    for _ in range(5):
        b = random_box(rng, nonfree=True)
        assert abs(float(m_npr_closed(b) - m_npr_oracle(b))) < 1e-6


@given(seeds)
def test_lso_invariance(seed):
    b = box_from_seed(seed)
    ref = (m_chsh_closed(b), m_npr_closed(b))
    for g in LSO[::7]:
        c = apply_det(g, b)
        assert (m_chsh_closed(c), m_npr_closed(c)) == ref


def test_free_box_short_circuits():
    assert m_npr_oracle(l_empty()) == 2
    assert m_chsh_oracle(l_empty()) == 2
    assert npr_decomposition(l_empty()) is None


def test_yield_functionals():
    assert yield_monotone(chsh_functional(3), pr_box()) == 4
    assert yield_monotone(constant_functional(7), noisy_pr(F(1, 3))) == 7
    assert yield_monotone(chsh_functional(0), table3_mixture(2)) == m_chsh_oracle(table3_mixture(2))


def test_tilted_functional():
    beta = F(1, 2)
    assert max(tilted_chsh(d, beta) for d in enumerate_deterministic_boxes(T2222)) == 2 + beta
    th = math.pi / 4
    b = tilt_beta(th)
    assert abs(float(tilted_chsh(tilted(th), b)) - math.sqrt(8 + 2 * b * b)) < 1e-9
    assert tilted_chsh(noisy_pr(F(1, 3)), 0) == m_chsh_closed(noisy_pr(F(1, 3)))
    with pytest.raises(BadParameter):
        tilted_functional(3)


def test_tilted_family_closed_forms():
    prev = None
    for th in [0.2 + i * (math.pi / 2 - 0.2) / 9 for i in range(10)]:
        b = tilted(th)
        assert abs(float(m_chsh_closed(b)) - tilted_m_chsh_formula(th)) < 1e-9
        assert abs(float(m_npr_closed(b)) - (2 * tilted_m_npr_formula(th) + 2)) < 1e-6
        cur = (float(m_chsh_closed(b)), float(m_npr_closed(b)))
        if prev:
            assert cur[0] > prev[0] and cur[1] < prev[1]
        prev = cur


def test_wrong_type():
    bt = BoxType(3, 2, 2, 2)
    u = F(1, 6)
    b = make_box(bt, [[[[u, u]] * 3] * 2] * 2)
    with pytest.raises(WrongType):
        m_chsh_closed(b)
    with pytest.raises(WrongType):
        m_npr_closed(b)


def test_infinity_constant():
    assert PlusInfinity == math.inf
