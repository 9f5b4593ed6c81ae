import math
from fractions import Fraction as F

import numpy as np
import pytest

from ccbox.analysis import (anchor_slice, certify_antichain, certify_chain, chain_subset,
                            constant_chsh_slice, equivalence_class, family_monotone_grid,
                            family_point, is_sensitive, nonsymmetry_images_free,
                            non_transitivity_witness, top_of_quantum_order_check,
                            witness_mixing_weight)
from ccbox.box import T2222, mix, random_box
from ccbox.catalog import hardy, l_empty, noisy_pr, pr_box, table3_box, tilted, tsirelson
from ccbox.errors import BadAnchor, FreeBoxClass
from ccbox.free_ops import apply_det, enumerate_ldo, enumerate_lso
from ccbox.monotones import m_chsh_closed, m_npr_closed
from ccbox.ordering import Relation, classify


def test_sensitivity():
    assert is_sensitive(pr_box())[0]
    assert not is_sensitive(l_empty())[0]


def test_random_nonfree_are_sensitive(rng):
    for _ in range(10):
        assert is_sensitive(random_box(rng, nonfree=True))[0]


def test_equivalence_class():
    assert equivalence_class(pr_box(), spot_check=2) == {pr_box(k) for k in range(8)}
    cls = equivalence_class(noisy_pr(F(1, 2)))
    assert len(cls) <= 64 and all(m_chsh_closed(b) == 3 for b in cls)
    with pytest.raises(FreeBoxClass):
        equivalence_class(l_empty())


def test_orbit_two_norms_match(rng):
    b = random_box(rng, nonfree=True)
    n = sum(v * v for v in b.flat)
    for c in equivalence_class(b):
        assert sum(v * v for v in c.flat) == n


def test_nonsymmetry_images_leave_class(rng):
    ldo = [o for o in enumerate_ldo(T2222, T2222) if not o.is_symmetry]
    for _ in range(5):
        b = random_box(rng, nonfree=True)
        op = ldo[int(rng.integers(len(ldo)))]
        assert classify(apply_det(op, b), b) is not Relation.EQUIVALENT


def test_family_points():
    assert family_point(1, 0, table3_box(1)) == pr_box()
    b = family_point(F(1, 2), F(1, 2), table3_box(2))
    assert m_chsh_closed(b) == F(5, 2) and m_npr_closed(b) == 3
    with pytest.raises(BadAnchor):
        family_point(F(1, 2), F(1, 2), l_empty())
    with pytest.raises(BadAnchor):
        family_point(F(1, 2), F(1, 2), pr_box())


@pytest.mark.parametrize("which", (1, 2, 3))
def test_family_grid_closed_forms(which):
    for a, g, mc, mn in family_monotone_grid(table3_box(which), 5):
        assert mc == 2 * a * (1 - g) + 2
        assert mn == (2 * a + 2 if g < 1 else 2)


def test_chain_and_antichain():
    assert certify_chain(chain_subset([F(1, 5), F(1, 2), F(9, 10)]))
    assert certify_chain([noisy_pr(F(1, 3))]) and certify_antichain([noisy_pr(F(1, 3))])
    assert certify_antichain(anchor_slice())
    assert certify_antichain([tilted(t) for t in (0.3, 0.6, 0.9, 1.2, math.pi / 2)])


def test_single_anchor_constant_chsh_slice_is_a_chain():
    boxes = constant_chsh_slice(table3_box(1), F(5, 2), [F(3, 10), F(1, 2), F(9, 10)])
    assert len({m_chsh_closed(b) for b in boxes}) == 1
    assert certify_chain(boxes)


def test_non_transitivity_witness():
    w = non_transitivity_witness()
    assert m_chsh_closed(w.r1) > m_chsh_closed(w.r2)
    assert m_npr_closed(w.r2) > m_npr_closed(w.r1)
    wt = witness_mixing_weight()
    assert wt == F(9, 14)
    assert mix([w.r1, table3_box(1)], [wt, 1 - wt]) == w.r3


def test_quantum_top():
    assert top_of_quantum_order_check(tsirelson(), [hardy(), tilted(math.pi / 4)])
    assert top_of_quantum_order_check(tsirelson(), [tsirelson()])
    assert nonsymmetry_images_free(tsirelson()) == (4032, True)
    assert not top_of_quantum_order_check(noisy_pr(F(1, 2)), [pr_box()])
