from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ccbox.box import T2222, BoxType, chsh_values, enumerate_deterministic_boxes, is_free
from ccbox.catalog import l_empty, l_npr_b, noisy_pr, pr_box
from ccbox.errors import NotInvertible, ResourceLimit, TypeMismatch
from ccbox.free_ops import (LosrOp, apply_det, apply_losr, compose, enumerate_ldo, enumerate_lso,
                            g123, g456, identity, inverse, ldo_count, ldo_images, lso_order,
                            reynolds_projection, subgroup_closure, tau, variant_op)

from conftest import box_from_seed, seeds

LDO = enumerate_ldo(T2222, T2222)
LSO = enumerate_lso(T2222)

# CHSH-variant permutation induced by each tau on pattern indices
TAU_ON_PR = {1: 4, 2: 1, 3: 2}


def test_counts():
    assert len(LDO) == ldo_count(T2222, T2222) == 4096
    assert len(LSO) == lso_order(T2222) == 64
    small = BoxType(2, 2, 1, 2)
    assert len(enumerate_ldo(small, T2222)) == ldo_count(small, T2222)


def test_cap_is_enforced():
    with pytest.raises(ResourceLimit):
        enumerate_ldo(T2222, T2222, cap=100)
    with pytest.raises(ResourceLimit):
        ldo_images(pr_box(), T2222, cap=100)


def test_images_match_apply_det(rng):
    b = box_from_seed(11)
    nums, den = b.integer_form
    images = ldo_images(b, T2222)
    for i in rng.integers(4096, size=40):
        img = apply_det(LDO[int(i)], b)
        assert [F(int(v), den) for v in images[int(i)]] == list(img.flat)


@given(seeds, st.integers(0, 4095))
def test_images_are_valid_boxes(seed, i):
    from ccbox.box import validate

    validate(apply_det(LDO[i], box_from_seed(seed)))


@given(seeds, st.integers(0, 4095), st.integers(0, 4095))
def test_compose_matches_sequential_application(seed, i, j):
    b = box_from_seed(seed)
    assert apply_det(compose(LDO[j], LDO[i]), b) == apply_det(LDO[j], apply_det(LDO[i], b))


@given(st.integers(0, 63), seeds)
def test_inverse(i, seed):
    b = box_from_seed(seed)
    g = LSO[i]
    assert compose(inverse(g), g) == identity(T2222)
    assert apply_det(inverse(g), apply_det(g, b)) == b


def test_non_symmetry_has_no_inverse():
    op = next(o for o in LDO if not o.is_symmetry)
    with pytest.raises(NotInvertible):
        inverse(op)


def test_deterministic_ops_map_free_to_free():
    for d in enumerate_deterministic_boxes(T2222)[:4]:
        for op in LDO[::97]:
            assert is_free(apply_det(op, d), fast=True)


def test_tau_table_actions():
    """Each tau acts on PR variants by the documented bit flips; tau_4..6 fix PR."""
    for i, flip in TAU_ON_PR.items():
        for k in range(8):
            assert apply_det(tau(i), pr_box(k)) == pr_box(k ^ flip)
    for i in (4, 5, 6):
        assert apply_det(tau(i), pr_box(0)) == pr_box(0)


def test_subgroups():
    assert len(g123()) == len(g456()) == 8
    assert set(g123()) & set(g456()) == {identity(T2222)}
    assert set(subgroup_closure(list(g123()) + list(g456()))) == set(LSO)
    for k in range(8):
        assert variant_op(k) in g123()


def test_subgroup_closure_rejects_non_symmetries():
    op = next(o for o in LDO if not o.is_symmetry)
    with pytest.raises(NotInvertible):
        subgroup_closure([op])


def test_symmetries_permute_chsh_values():
    b = box_from_seed(3)
    vals = sorted(chsh_values(b))
    for g in LSO:
        assert sorted(chsh_values(apply_det(g, b))) == vals


def test_losr_application_and_validation():
    op = LosrOp.of([F(1, 2), F(1, 2)], [identity(T2222), tau(4)])
    b = apply_losr(op, noisy_pr(F(1, 2)))
    assert b == noisy_pr(F(1, 2))
    with pytest.raises(Exception):
        LosrOp.of([F(1, 2), F(1, 3)], [identity(T2222), tau(4)])
    other = BoxType(3, 2, 2, 2)
    with pytest.raises(TypeMismatch):
        apply_det(identity(other), pr_box())


def test_reynolds():
    assert reynolds_projection(pr_box()) == pr_box()
    assert reynolds_projection(l_empty()) == l_empty()
    for d in enumerate_deterministic_boxes(T2222):
        if chsh_values(d)[0] == 2:
            assert reynolds_projection(d) == l_npr_b()
