"""The yield monotone M_CHSH, the cost monotone M_NPR and their relatives on 2222 boxes.

Monotone values are exact :class:`Fraction` or :class:`Approx` when finite;
``math.inf`` / ``-math.inf`` stand for the infinite cost / yield values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

import numpy as np

from . import lp
from .box import (T2222, Box, _require_2222, chsh, chsh_coefficients, mix, to_correlators,
                  violated_variant)
from .catalog import l_npr_b, noisy_pr, pr_box
from .errors import AmbiguousBoundary, ApproxUnsound, BadParameter
from .free_ops import DEFAULT_LDO_CAP, apply_det, inverse, ldo_images, variant_op
from .ordering import _coords, _dedup, _tolerance
from .scalar import Approx, as_fraction, compare, is_exact, to_float

F = Fraction
PlusInfinity = math.inf
MinusInfinity = -math.inf

NPR_BISECTION_DEPTH = 40


# ---------------------------------------------------------------------------
# M_CHSH


def m_chsh_closed(box: Box):
    """Largest CHSH value reachable by free operations: the violated CHSH_k, or 2."""
    _require_2222(box)
    k = violated_variant(box)
    return F(2) if k is None else chsh(box, k)


def m_chsh_oracle(box: Box, cap: int = DEFAULT_LDO_CAP):
    """Max of CHSH_0 over all deterministic images; exact by linearity."""
    return yield_monotone(chsh_functional(0), box, cap)


# ---------------------------------------------------------------------------
# M_NPR


@dataclass(frozen=True)
class NprDecomposition:
    """``box = gamma * boundary_box + (1 - gamma) * C_k(alpha)``."""

    alpha: object
    gamma: object
    boundary_box: Box | None
    variant: int

    def reconstruct(self) -> Box:
        chain = noisy_pr(self.alpha, self.variant)
        if self.boundary_box is None:
            return chain
        return mix([self.boundary_box, chain], [self.gamma, 1 - self.gamma])


@cache
def _canonical_parts():
    PR, L = pr_box(0).flat, l_npr_b(0).flat
    return PR, L


def _on_chain(form) -> bool:
    a = form.corr[0][0]
    vals = [*form.a, *form.b]
    corr = [form.corr[0][0], form.corr[1][0], form.corr[0][1], -form.corr[1][1]]
    return all(compare(v, 0) == 0 for v in vals) and all(compare(c, a) == 0 for c in corr)


def npr_decomposition(box: Box) -> NprDecomposition | None:
    """The unique split into a CHSH-saturating boundary box and a chain element.

    Returns None for free boxes.  Computed in the canonical k = 0 frame: each
    entry of ``(R - (1 - gamma) C(alpha)) / gamma`` with ``1 - gamma =
    (c - 2) / (2 alpha)`` is nonnegative iff ``alpha`` is at least an
    entry-specific bound, and the decomposition uses the largest such bound.
    """
    _require_2222(box)
    k = violated_variant(box)
    if k is None:
        return None
    R = apply_det(inverse(variant_op(k)), box)
    c = chsh(R, 0)
    excess = c - 2
    if _on_chain(to_correlators(R)):
        # already a chain element; the boundary part has zero weight
        return NprDecomposition(excess / 2, F(0), None, k)
    PR, L = _canonical_parts()
    alpha = excess / 2
    for i in range(16):
        r = R.entry(*np.unravel_index(i, (2, 2, 2, 2)))
        denom = 2 * r - excess * (PR[i] - L[i])
        bound = excess * L[i] / denom
        if to_float(bound) > to_float(alpha):
            alpha = bound
    if to_float(alpha) > 1:
        alpha = F(1) if is_exact(alpha) else Approx(1.0, alpha.tol)
    one_minus_gamma = excess / (2 * alpha)
    gamma = 1 - one_minus_gamma
    if R.exact:
        chain = noisy_pr(alpha)
        table = (R.table - one_minus_gamma * chain.table) / gamma
        L_bb = Box(T2222, table)
    else:
        a = to_float(alpha)
        chain = noisy_pr(Approx(a, alpha.tol))
        table = (R.as_float() - to_float(one_minus_gamma) * chain.as_float()) / to_float(gamma)
        table = np.where(np.abs(table) < 10 * R.tol / to_float(gamma), 0.0, table)
        L_bb = Box(T2222, table, R.tol / to_float(gamma))
    boundary = apply_det(variant_op(k), L_bb)
    return NprDecomposition(alpha, gamma, boundary, k)


def m_npr_closed(box: Box):
    """Cost monotone ``2 alpha + 2`` from :func:`npr_decomposition` (2 for free boxes)."""
    dec = npr_decomposition(box)
    return F(2) if dec is None else 2 * dec.alpha + 2


@cache
def _chain_images(k: int, dst=T2222):
    """Deduplicated (PR_k image, L_NPR,k image) pairs in no-signalling coordinates."""
    G = _coords(dst)
    pr_num, pr_den = pr_box(k).integer_form
    l_num, l_den = l_npr_b(k).integer_form
    den = math.lcm(pr_den, l_den)
    a = ldo_images(pr_box(k), dst) * (den // pr_den) @ G.T
    b = ldo_images(l_npr_b(k), dst) * (den // l_den) @ G.T
    pairs, _ = _dedup(np.hstack([a, b]))
    d = G.shape[0]
    return pairs[:, :d], pairs[:, d:], den


def _chain_feasible(alpha: Fraction, k: int, target: Box) -> bool:
    A, B, den = _chain_images(k)
    if target.exact:
        q = alpha.denominator
        p = alpha.numerator
        V = A.astype(object) * p + B.astype(object) * (q - p)
        V, _ = _dedup(V)
        tnum, tden = target.integer_form
        G = _coords(T2222).astype(object)
        t = (tnum.astype(object) @ G.T).tolist()
        return lp._membership_int(V.tolist(), den * q, [int(v) for v in t], tden).feasible
    a = float(alpha)
    V = (a * A + (1 - a) * B) / den
    G = _coords(T2222)
    t = G @ target.as_float().reshape(-1)
    return lp.approx_hull_membership(V, t, _tolerance(target)).feasible


def m_npr_oracle(box: Box, depth: int = NPR_BISECTION_DEPTH):
    """Cost monotone by bisection on the chain: the least alpha with C_k(alpha) -> box.

    Feasibility is monotone in alpha since C(alpha) -> C(alpha') for alpha >= alpha'.
    Approximate boxes stop refining once an LP falls inside the tolerance band.
    """
    _require_2222(box)
    k = violated_variant(box)
    if k is None:
        return F(2)
    if not _chain_feasible(F(1), k, box):
        return PlusInfinity
    lo, hi = F(0), F(1)
    for _ in range(depth):
        mid = (lo + hi) / 2
        try:
            ok = _chain_feasible(mid, k, box)
        except ApproxUnsound:
            break
        if ok:
            hi = mid
        else:
            lo = mid
    value = 2 * hi + 2
    if box.exact:
        return value
    return Approx(float(value), max(2 * float(hi - lo), box.tol))


# ---------------------------------------------------------------------------
# distance measures derived from M_CHSH


def nonlocal_fraction(box: Box):
    return (m_chsh_closed(box) - 2) / 2


def robustness_local(box: Box):
    m = m_chsh_closed(box)
    return (m - 2) / (m + 2)


def robustness_general(box: Box):
    m = m_chsh_closed(box)
    return (m - 2) / (m + 4)


# ---------------------------------------------------------------------------
# linear functionals and the yield construction


@dataclass(frozen=True)
class Functional:
    """``coeffs . P + constant`` on flat 2222 tables."""

    coeffs: tuple
    constant: object = F(0)

    def __post_init__(self):
        if len(self.coeffs) != T2222.size:
            raise BadParameter(f"a 2222 functional needs {T2222.size} coefficients")

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in (*self.coeffs, self.constant))

    def __call__(self, box: Box):
        _require_2222(box)
        if box.exact and self.exact:
            return sum((as_fraction(c) * v for c, v in zip(self.coeffs, box.flat) if c), F(0)) + as_fraction(self.constant)
        val = float(np.dot([float(c) for c in self.coeffs], box.as_float().reshape(-1))) + float(self.constant)
        tol = (box.tol or 0) * sum(abs(float(c)) for c in self.coeffs)
        return Approx(val, max(tol, 1e-15))


def chsh_functional(k: int = 0) -> Functional:
    return Functional(tuple(F(int(v)) for v in chsh_coefficients(k).reshape(-1)))


def tilted_functional(beta) -> Functional:
    """``beta <A0> + CHSH_0``; ``<A0>`` is read from the t = 0 marginal."""
    b = as_fraction(beta) if is_exact(beta) else float(beta)
    if not 0 <= b <= 2:
        raise BadParameter(f"tilt parameter must lie in [0, 2], got {beta}")
    coeffs = chsh_coefficients(0).astype(object)
    for x in range(2):
        for y in range(2):
            coeffs[0, 0, x, y] = coeffs[0, 0, x, y] + b * (-1) ** x
    return Functional(tuple(v if is_exact(v) else float(v) for v in coeffs.reshape(-1)))


def constant_functional(value) -> Functional:
    return Functional(tuple([F(0)] * T2222.size), value)


def yield_monotone(objective: Functional, box: Box, cap: int = DEFAULT_LDO_CAP):
    """Max of ``objective`` over every box reachable from ``box`` (attained at a vertex)."""
    _require_2222(box)
    images = ldo_images(box, T2222, cap)
    if box.exact and objective.exact:
        den = box.integer_form[1]
        coeffs = [as_fraction(v) for v in objective.coeffs]
        cden = math.lcm(*(c.denominator for c in coeffs))
        cnum = np.array([int(c * cden) for c in coeffs], dtype=object)
        if images.dtype != object and int(np.abs(cnum).sum()) * den < 2**62:
            scores = images @ cnum.astype(np.int64)
        else:
            scores = images.astype(object) @ cnum
        return F(int(max(scores)), den * cden) + as_fraction(objective.constant)
    if box.exact:
        images = images.astype(float) / box.integer_form[1]
    c = np.array([float(v) for v in objective.coeffs])
    best = float(np.max(images @ c)) + float(objective.constant)
    tol = _tolerance(box) * float(np.abs(c).sum())
    return Approx(best, tol)


def tilted_chsh(box: Box, beta):
    return tilted_functional(beta)(box)


__all__ = [
    "PlusInfinity", "MinusInfinity", "NPR_BISECTION_DEPTH", "m_chsh_closed", "m_chsh_oracle",
    "NprDecomposition", "npr_decomposition", "m_npr_closed", "m_npr_oracle", "nonlocal_fraction",
    "robustness_local", "robustness_general", "Functional", "chsh_functional", "tilted_functional",
    "constant_functional", "yield_monotone", "tilted_chsh", "AmbiguousBoundary",
]
