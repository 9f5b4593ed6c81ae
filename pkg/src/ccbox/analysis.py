"""Structural experiments on the 2222 preorder: sensitivity, equivalence classes,
the two-parameter family R(alpha, gamma), chains, antichains and the quantum top."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import NamedTuple, Sequence

import numpy as np

from .box import T2222, Box, _require_2222, chsh, is_free, mix
from .catalog import noisy_pr, table3_box
from .errors import BadAnchor, FreeBoxClass
from .free_ops import DEFAULT_LDO_CAP, enumerate_lso, ldo_images, orbit, wing_tables
from .monotones import m_chsh_closed, m_npr_closed
from .ordering import (FeasibilityCertificate, Relation, _approx_decision, _exact_decision,
                       _tolerance, classify, classify_matrix)
from .scalar import as_fraction, compare, is_exact

F = Fraction


# ---------------------------------------------------------------------------
# sensitivity and orbitality


@cache
def _symmetry_mask(box_type=T2222) -> np.ndarray:
    """Boolean mask over :func:`enumerate_ldo` order marking the local symmetries."""
    wa, wb, _, _ = wing_tables(box_type, box_type)
    ba = np.array([w.is_bijective(box_type.s, box_type.x, box_type.x) for w in wa])
    bb = np.array([w.is_bijective(box_type.t, box_type.y, box_type.y) for w in wb])
    return np.outer(ba, bb).reshape(-1)


def ldtno_images(box: Box, cap: int = DEFAULT_LDO_CAP) -> tuple[np.ndarray, np.ndarray]:
    """Images under type-preserving deterministic non-symmetries, with their op indices."""
    images = ldo_images(box, box.box_type, cap)
    keep = np.nonzero(~_symmetry_mask(box.box_type))[0]
    return images[keep], keep


def is_sensitive(box: Box, cap: int = DEFAULT_LDO_CAP) -> tuple[bool, FeasibilityCertificate]:
    """True when ``box`` lies outside the hull of its non-symmetry deterministic images."""
    images, op_index = ldtno_images(box, cap)
    if box.exact:
        res = _exact_decision(images, box.integer_form[1], box, op_index)
    else:
        res = _approx_decision(images, box, _tolerance(box), op_index)
    cert = FeasibilityCertificate(
        feasible=res.feasible, src=box.box_type, dst=box.box_type,
        weights=sorted(res.weights.items()) if res.feasible and res.weights else None,
        witness=None if res.feasible else res.witness, exact=box.exact,
        n_vertices=res.extra.get("n_vertices", 0), method=res.method,
    )
    return not res.feasible, cert


def equivalence_class(box: Box, spot_check: int = 0, seed: int = 0) -> set[Box]:
    """The LOSR equivalence class of a nonfree box, i.e. its orbit under the local symmetries.

    ``spot_check`` members are re-confirmed Equivalent by two LPs.
    """
    if is_free(box, fast=box.box_type.is_2222):
        raise FreeBoxClass("free boxes form a single class containing every free box")
    members = orbit(box, enumerate_lso(box.box_type))
    if spot_check:
        rng = np.random.default_rng(seed)
        ordered = sorted(members, key=lambda b: b.key)
        for i in rng.choice(len(ordered), size=min(spot_check, len(ordered)), replace=False):
            rel = classify(box, ordered[int(i)])
            if rel is not Relation.EQUIVALENT:
                raise AssertionError(f"orbit member classified as {rel.value}")
    return members


# ---------------------------------------------------------------------------
# the family R(alpha, gamma) = gamma * anchor + (1 - gamma) * C(alpha)


def validate_anchor(anchor: Box) -> None:
    """Anchors must saturate CHSH_0 and have a vanishing probability entry."""
    _require_2222(anchor)
    if compare(chsh(anchor, 0), 2) != 0:
        raise BadAnchor(f"anchor has CHSH_0 = {chsh(anchor, 0)}, needs exactly 2")
    zero = any(v == 0 for v in anchor.flat) if anchor.exact else float(np.min(anchor.as_float())) <= anchor.tol
    if not zero:
        raise BadAnchor("anchor has no zero probability entry")


@dataclass(frozen=True)
class FamilyPoint:
    alpha: object
    gamma: object
    anchor: Box

    def __post_init__(self):
        validate_anchor(self.anchor)
        for name in ("alpha", "gamma"):
            v = getattr(self, name)
            if is_exact(v):
                object.__setattr__(self, name, as_fraction(v))
            if not 0 <= float(getattr(self, name)) <= 1:
                raise BadAnchor(f"{name} must lie in [0, 1], got {v}")

    def realize(self) -> Box:
        return mix([self.anchor, noisy_pr(self.alpha)], [self.gamma, 1 - self.gamma])


def family_point(alpha, gamma, anchor: Box) -> Box:
    return FamilyPoint(alpha, gamma, anchor).realize()


def family_monotone_grid(anchor: Box, grid: int = 9) -> list[tuple]:
    """Rows ``(alpha, gamma, M_CHSH, M_NPR)`` on a uniform ``grid x grid`` lattice of [0,1]^2."""
    validate_anchor(anchor)
    steps = [F(i, grid - 1) for i in range(grid)]
    rows = []
    for a in steps:
        for g in steps:
            b = family_point(a, g, anchor)
            rows.append((a, g, m_chsh_closed(b), m_npr_closed(b)))
    return rows


# ---------------------------------------------------------------------------
# chains and antichains


def certify_chain(boxes: Sequence[Box], jobs: int = 1) -> bool:
    """Every pair strictly ordered one way or the other."""
    M = classify_matrix(list(boxes), jobs)
    strict = (Relation.STRICTLY_ABOVE, Relation.STRICTLY_BELOW)
    return all(M[i][j] in strict for i in range(len(boxes)) for j in range(i + 1, len(boxes)))


def certify_antichain(boxes: Sequence[Box], jobs: int = 1) -> bool:
    """Every pair incomparable."""
    M = classify_matrix(list(boxes), jobs)
    return all(M[i][j] is Relation.INCOMPARABLE for i in range(len(boxes)) for j in range(i + 1, len(boxes)))


class Witness(NamedTuple):
    r1: Box
    r2: Box
    r3: Box


# (alpha, gamma) coordinates of the three witnesses, all on anchor L1bb
WITNESS_COORDS = ((F(4, 5), F(3, 10)), (F(19, 20), F(13, 20)), (F(4, 5), F(11, 20)))


def witness_mixing_weight() -> Fraction:
    """Weight w with R3 = w R1 + (1 - w) L1bb.

    Moving along gamma at fixed alpha is mixing with the anchor, which is free:
    (1 - g3) = w (1 - g1).
    """
    (_, g1), _, (_, g3) = WITNESS_COORDS
    return (1 - g3) / (1 - g1)


def non_transitivity_witness(verify: bool = True) -> Witness:
    """R1 | R2 and R3 | R2 incomparable while R1 is strictly above R3."""
    anchor = table3_box(1)
    w = Witness(*(family_point(a, g, anchor) for a, g in WITNESS_COORDS))
    if verify:
        checks = [
            (classify(w.r1, w.r2), Relation.INCOMPARABLE),
            (classify(w.r3, w.r2), Relation.INCOMPARABLE),
            (classify(w.r1, w.r3), Relation.STRICTLY_ABOVE),
        ]
        for got, want in checks:
            if got is not want:
                raise AssertionError(f"witness check failed: {got.value} != {want.value}")
    return w


def chain_subset(alphas: Sequence) -> list[Box]:
    return [noisy_pr(a) for a in alphas]


def constant_chsh_slice(anchor: Box, m_chsh, alphas: Sequence) -> list[Box]:
    """Family points on one anchor with M_CHSH fixed: gamma = 1 - (m - 2) / (2 alpha).

    Both monotones are complete on a single family, so such a slice is a chain
    ordered by alpha.
    """
    excess = as_fraction(m_chsh) - 2
    return [family_point(a, 1 - excess / (2 * as_fraction(a)), anchor) for a in alphas]


@cache
def saturating_deterministic_boxes() -> tuple[Box, ...]:
    """The eight deterministic boxes with CHSH_0 = 2, in enumeration order."""
    from .box import enumerate_deterministic_boxes

    return tuple(d for d in enumerate_deterministic_boxes(T2222) if chsh(d, 0) == 2)


# pairs of saturating deterministic boxes whose midpoints give mutually
# incomparable family points at fixed (alpha, gamma)
_SLICE_PAIRS = ((0, 1), (0, 2), (0, 3), (0, 5), (0, 6))


def anchor_slice(alpha=F(1, 2), gamma=F(1, 2)) -> list[Box]:
    """Family points sharing (alpha, gamma), hence both monotone values, over five anchors."""
    dets = saturating_deterministic_boxes()
    anchors = [mix([dets[i], dets[j]], [F(1, 2), F(1, 2)]) for i, j in _SLICE_PAIRS]
    return [family_point(alpha, gamma, a) for a in anchors]


# ---------------------------------------------------------------------------
# quantum top of the order


def nonsymmetry_images_free(box: Box, cap: int = DEFAULT_LDO_CAP) -> tuple[int, bool]:
    """Count the non-symmetry deterministic images and check they are all free."""
    images, _ = ldtno_images(box, cap)
    n = len(images)
    rows = np.unique(images, axis=0) if images.dtype != object else images
    from .box import violated_variant

    for r in rows:
        if box.exact:
            b = Box(box.box_type, np.array([Fraction(int(v), box.integer_form[1]) for v in r],
                                           dtype=object).reshape(box.box_type.shape))
        else:
            b = Box(box.box_type, np.asarray(r, dtype=float).reshape(box.box_type.shape), box.tol)
        if violated_variant(b) is not None:
            return n, False
    return n, True


def top_of_quantum_order_check(box: Box, candidates: Sequence[Box]) -> bool:
    """No candidate lies strictly above ``box`` and every non-symmetry image of ``box`` is free."""
    for c in candidates:
        if classify(c, box) is Relation.STRICTLY_ABOVE:
            return False
    return nonsymmetry_images_free(box)[1]


__all__ = [
    "ldtno_images", "is_sensitive", "equivalence_class", "validate_anchor", "FamilyPoint",
    "family_point", "family_monotone_grid", "certify_chain", "certify_antichain", "Witness",
    "WITNESS_COORDS", "witness_mixing_weight", "non_transitivity_witness", "chain_subset",
    "constant_chsh_slice", "saturating_deterministic_boxes", "anchor_slice",
    "nonsymmetry_images_free", "top_of_quantum_order_check",
]
