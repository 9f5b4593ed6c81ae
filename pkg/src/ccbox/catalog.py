"""Named boxes: PR variants, the noisy-PR chain, Table-style anchors, quantum boxes."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cache

from .box import T2222, Box, CorrelatorForm, from_correlators, mix
from .errors import BadParameter
from .scalar import DEFAULT_TOL, Approx, as_fraction, is_exact

F = Fraction


def _form(row) -> Box:
    return from_correlators(CorrelatorForm.from_row(row))


@cache
def l_empty() -> Box:
    """The maximally mixed box: uniform outcomes for every setting pair."""
    return _form([0] * 8)


@cache
def _pr0() -> Box:
    return _form([0, 0, 0, 0, 1, 1, 1, -1])


@cache
def pr_box(k: int = 0) -> Box:
    """PR variant k, obtained from the canonical PR box by the matching G_123 element."""
    from .free_ops import apply_det, variant_op

    if not 0 <= k <= 7:
        raise BadParameter(f"PR variant index must be in 0..7, got {k}")
    return apply_det(variant_op(k), _pr0())


@cache
def l_npr_b(k: int = 0) -> Box:
    return mix([pr_box(k), l_empty()], [F(1, 2), F(1, 2)])


def noisy_pr(alpha, k: int = 0) -> Box:
    """C_k(alpha) = alpha * PR_k + (1 - alpha) * L_NPR,k."""
    if is_exact(alpha):
        alpha = as_fraction(alpha)
    a = alpha.value if isinstance(alpha, Approx) else alpha
    if not 0 <= a <= 1:
        raise BadParameter(f"alpha must lie in [0, 1], got {alpha}")
    return mix([pr_box(k), l_npr_b(k)], [alpha, 1 - alpha])


_TABLE3 = {
    1: [1, 1, 1, 1, 1, 1, 1, 1],
    2: [0, 0, 0, 0, 1, 1, 0, 0],
    3: [0, 0, 0, 0, 1, 0, 1, 0],
}


@cache
def table3_box(which: int) -> Box:
    """The CHSH-saturating boundary boxes L1bb, L2bb, L3bb."""
    if which not in _TABLE3:
        raise BadParameter(f"selector must be 1, 2 or 3, got {which}")
    return _form(_TABLE3[which])


@cache
def table3_mixture(which: int) -> Box:
    return mix([table3_box(which), noisy_pr(F(1, 2))], [F(1, 2), F(1, 2)])


# ---------------------------------------------------------------------------
# quantum boxes (irrational, approximate)


def tsirelson(tol: float = DEFAULT_TOL) -> Box:
    r = math.sqrt(2) / 2
    return from_correlators(CorrelatorForm.from_row([0.0, 0.0, 0.0, 0.0, r, r, r, -r]), tol=tol)


def hardy(tol: float = DEFAULT_TOL) -> Box:
    s5 = math.sqrt(5)
    row = [5 - 2 * s5, s5 - 2, 5 - 2 * s5, s5 - 2, 6 * s5 - 13, 3 * s5 - 6, 3 * s5 - 6, 2 * s5 - 5]
    return from_correlators(CorrelatorForm.from_row(row), tol=tol)


def xi(theta: float) -> float:
    return math.sqrt(math.sin(theta) ** 2 + 1)


def tilted(theta: float, tol: float = DEFAULT_TOL) -> Box:
    """Maximiser of the tilted CHSH functional, 0 <= theta <= pi/2."""
    theta = float(theta)
    if not 0 <= theta <= math.pi / 2 + 1e-15:
        raise BadParameter(f"theta must lie in [0, pi/2], got {theta}")
    c, s2, z = math.cos(theta), math.sin(theta) ** 2, xi(theta)
    row = [c, 0.0, c / z, c / z, 1 / z, s2 / z, 1 / z, -s2 / z]
    return from_correlators(CorrelatorForm.from_row(row), tol=tol)


def tilt_beta(theta: float) -> float:
    """Tilt parameter whose functional is maximised by ``tilted(theta)``."""
    return 2 / math.sqrt(1 + 2 * math.tan(theta) ** 2)


def tilted_m_npr_formula(theta: float) -> float:
    z = xi(theta)
    return z * (z - 1) / (2 * (1 - math.cos(theta)) - z * (z - 1))


def tilted_m_chsh_formula(theta: float) -> float:
    return 2 * math.sqrt(2 - math.cos(theta) ** 2)


# ---------------------------------------------------------------------------
# name lookup for the CLI

NAMES = ("pr", "noisy-pr", "l-npr-b", "l-empty", "l1bb", "l2bb", "l3bb",
         "mix1", "mix2", "mix3", "tsirelson", "hardy", "tilted")


def build(name: str, *, k: int = 0, alpha=None, theta: float | None = None, tol: float = DEFAULT_TOL) -> Box:
    if name == "pr":
        return pr_box(k)
    if name == "noisy-pr":
        if alpha is None:
            raise BadParameter("noisy-pr needs --alpha")
        return noisy_pr(alpha, k)
    if name == "l-npr-b":
        return l_npr_b(k)
    if name == "l-empty":
        return l_empty()
    if name in ("l1bb", "l2bb", "l3bb"):
        return table3_box(int(name[1]))
    if name in ("mix1", "mix2", "mix3"):
        return table3_mixture(int(name[3]))
    if name == "tsirelson":
        return tsirelson(tol)
    if name == "hardy":
        return hardy(tol)
    if name == "tilted":
        if theta is None:
            raise BadParameter("tilted needs --theta")
        return tilted(theta, tol)
    raise BadParameter(f"unknown catalog entry {name!r}; choose from {', '.join(NAMES)}")


__all__ = [
    "T2222", "l_empty", "pr_box", "l_npr_b", "noisy_pr", "table3_box", "table3_mixture",
    "tsirelson", "hardy", "tilted", "tilt_beta", "xi", "tilted_m_npr_formula",
    "tilted_m_chsh_formula", "build", "NAMES",
]
