"""Common-cause boxes: exact conditional probability tables P(x,y|s,t).

Tables are stored as numpy arrays indexed ``[s, t, x, y]``.  Exact boxes hold
:class:`~fractions.Fraction` objects; approximate boxes hold float64 values and
a single absolute tolerance ``tol``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import lp
from .errors import (
    AmbiguousBoundary,
    NegativeProbability,
    NotNormalized,
    ResourceLimit,
    SignallingDetected,
    TypeMismatch,
    WeightError,
    WrongType,
)
from .scalar import DEFAULT_TOL, MARGIN, Approx, as_fraction, exceeds, is_exact

DEFAULT_DET_CAP = 10**6


@dataclass(frozen=True, order=True)
class BoxType:
    """Cardinalities (|X|, |Y|; |S|, |T|) of outcomes and settings."""

    x: int
    y: int
    s: int
    t: int

    def __post_init__(self):
        for name in ("x", "y", "s", "t"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"cardinality {name} must be a positive integer, got {v!r}")

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (self.s, self.t, self.x, self.y)

    @property
    def size(self) -> int:
        return self.s * self.t * self.x * self.y

    @property
    def is_2222(self) -> bool:
        return (self.x, self.y, self.s, self.t) == (2, 2, 2, 2)

    def __str__(self):
        return f"{self.x}{self.y}{self.s}{self.t}"


T2222 = BoxType(2, 2, 2, 2)


class Box:
    """An immutable, validated conditional probability table."""

    def __init__(self, box_type: BoxType, table: np.ndarray, tol: float | None = None):
        # Trusted constructor: use make_box() to validate user data.
        table = np.asarray(table, dtype=object if tol is None else float).reshape(box_type.shape)
        table.setflags(write=False)
        object.__setattr__(self, "box_type", box_type)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "tol", tol)

    def __setattr__(self, name, value):
        if name in ("box_type", "table", "tol"):
            raise AttributeError("Box is immutable")
        object.__setattr__(self, name, value)

    @property
    def exact(self) -> bool:
        return self.tol is None

    @cached_property
    def flat(self) -> np.ndarray:
        return self.table.reshape(-1)

    @cached_property
    def integer_form(self) -> tuple[np.ndarray, int]:
        """``(numerators, denominator)`` over the least common denominator.

        Numerators are int64 when that is overflow-safe, Python ints otherwise.
        """
        if not self.exact:
            raise TypeError("integer form is only defined for exact boxes")
        den = 1
        for v in self.flat:
            den = math.lcm(den, v.denominator)
        nums = [int(v * den) for v in self.flat]
        dtype = np.int64 if den < 2**62 // max(1, self.box_type.size) else object
        return np.array(nums, dtype=dtype), den

    def as_float(self) -> np.ndarray:
        return np.array(self.table, dtype=float)

    def entry(self, s: int, t: int, x: int, y: int):
        v = self.table[s, t, x, y]
        return v if self.exact else Approx(float(v), self.tol)

    @cached_property
    def key(self) -> tuple:
        if self.exact:
            return (self.box_type, True, tuple(self.flat))
        return (self.box_type, False, tuple(float(v) for v in self.flat))

    def __eq__(self, other):
        if not isinstance(other, Box):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        kind = "exact" if self.exact else f"approx tol={self.tol:.1g}"
        if self.box_type.is_2222:
            row = ", ".join(_short(v) for v in to_correlators(self).as_row())
            return f"Box<{self.box_type} {kind}: {row}>"
        return f"Box<{self.box_type} {kind}>"

    # convenience --------------------------------------------------------
    def marginal_a(self) -> np.ndarray:
        """P_A[s, x], read off at t = 0."""
        return self.table[:, 0, :, :].sum(axis=2)

    def marginal_b(self) -> np.ndarray:
        """P_B[t, y], read off at s = 0."""
        return self.table[0, :, :, :].sum(axis=1)


def _short(v) -> str:
    if isinstance(v, Approx):
        return f"{v.value:.4g}"
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


# ---------------------------------------------------------------------------
# construction and validation


def make_box(box_type: BoxType, table, tol: float | None = None) -> Box:
    """Validate ``table`` (nested ``[s][t][x][y]``) and build a :class:`Box`.

    The box is exact unless ``tol`` is given or the table contains floats or
    :class:`Approx` values, in which case ``tol`` defaults to ``DEFAULT_TOL``.
    """
    arr = np.array(table, dtype=object)
    if arr.shape != box_type.shape:
        raise ValueError(f"table shape {arr.shape} does not match type {box_type} (expected {box_type.shape})")
    approx = tol is not None or any(
        isinstance(v, (float, np.floating, Approx)) for v in arr.reshape(-1)
    )
    if approx:
        if tol is None:
            tol = DEFAULT_TOL
        vals = np.array([v.value if isinstance(v, Approx) else float(v) for v in arr.reshape(-1)], dtype=float)
        box = Box(box_type, vals.reshape(box_type.shape), tol)
    else:
        vals = np.empty(arr.size, dtype=object)
        vals[:] = [as_fraction(v) for v in arr.reshape(-1)]
        box = Box(box_type, vals.reshape(box_type.shape))
    validate(box)
    return box


def validate(box: Box) -> None:
    """Raise if ``box`` violates nonnegativity, normalization or no-signalling."""
    bt = box.box_type
    P = box.table
    tol = 0 if box.exact else box.tol
    for idx in itertools.product(range(bt.s), range(bt.t), range(bt.x), range(bt.y)):
        if P[idx] < -tol:
            raise NegativeProbability(f"P(x={idx[2]},y={idx[3]}|s={idx[0]},t={idx[1]}) = {P[idx]} < 0")
    for s, t in itertools.product(range(bt.s), range(bt.t)):
        total = P[s, t].sum()
        if abs(total - 1) > tol * bt.x * bt.y:
            raise NotNormalized(f"sum over (x,y) at (s={s},t={t}) is {total}, not 1")
    # B's marginal may not depend on s
    for t, y in itertools.product(range(bt.t), range(bt.y)):
        ref = P[0, t, :, y].sum()
        for s in range(1, bt.s):
            if abs(P[s, t, :, y].sum() - ref) > tol * 2 * bt.x:
                raise SignallingDetected(f"P_Y(y={y}|t={t}) differs between s=0 and s={s}")
    # A's marginal may not depend on t
    for s, x in itertools.product(range(bt.s), range(bt.x)):
        ref = P[s, 0, x, :].sum()
        for t in range(1, bt.t):
            if abs(P[s, t, x, :].sum() - ref) > tol * 2 * bt.y:
                raise SignallingDetected(f"P_X(x={x}|s={s}) differs between t=0 and t={t}")


# ---------------------------------------------------------------------------
# correlator form (2222 only)


@dataclass(frozen=True)
class CorrelatorForm:
    """Outcome biases ``a[s]``, ``b[t]`` and two-point correlators ``corr[s][t]``."""

    a: tuple
    b: tuple
    corr: tuple  # corr[s][t] = <A_s B_t>

    def as_row(self) -> tuple:
        """Column order A0, A1, B0, B1, A0B0, A1B0, A0B1, A1B1."""
        c = self.corr
        return (*self.a, *self.b, c[0][0], c[1][0], c[0][1], c[1][1])

    @classmethod
    def from_row(cls, row: Sequence) -> CorrelatorForm:
        a0, a1, b0, b1, c00, c10, c01, c11 = row
        return cls((a0, a1), (b0, b1), ((c00, c01), (c10, c11)))


def _require_2222(box: Box) -> None:
    if not box.box_type.is_2222:
        raise WrongType(f"operation needs a 2222 box, got type {box.box_type}")


def _wrap(v, box: Box, weight: float = 1.0):
    if box.exact:
        return v
    return Approx(float(v), box.tol * weight)


def to_correlators(box: Box) -> CorrelatorForm:
    _require_2222(box)
    P = box.table
    sgn = np.array([1, -1])
    pa = box.marginal_a()
    pb = box.marginal_b()
    a = tuple(_wrap(pa[s] @ sgn, box, 4) for s in range(2))
    b = tuple(_wrap(pb[t] @ sgn, box, 4) for t in range(2))
    par = np.array([[1, -1], [-1, 1]])
    corr = tuple(
        tuple(_wrap((P[s, t] * par).sum(), box, 4) for t in range(2)) for s in range(2)
    )
    return CorrelatorForm(a, b, corr)


def from_correlators(form: CorrelatorForm, tol: float | None = None) -> Box:
    vals = [*form.a, *form.b, *[v for row in form.corr for v in row]]
    approx = tol is not None or any(isinstance(v, (float, Approx)) for v in vals)
    if approx:
        tol = tol or max([DEFAULT_TOL] + [v.tol for v in vals if isinstance(v, Approx)])

        def conv(v):
            return v.value if isinstance(v, Approx) else float(v)
    else:
        conv = as_fraction
    A = [conv(v) for v in form.a]
    B = [conv(v) for v in form.b]
    C = [[conv(v) for v in row] for row in form.corr]
    table = [[[[(1 + (-1) ** x * A[s] + (-1) ** y * B[t] + (-1) ** (x ^ y) * C[s][t]) / 4
                for y in range(2)] for x in range(2)] for t in range(2)] for s in range(2)]
    if not approx:
        table = [[[[Fraction(v) for v in r] for r in m] for m in blk] for blk in table]
    return make_box(T2222, table, tol=tol if approx else None)


# ---------------------------------------------------------------------------
# CHSH functionals

# signs on (A0B0, A1B0, A0B1, A1B1) for CHSH_0 ... CHSH_7
CHSH_SIGNS = (
    (+1, +1, +1, -1),
    (+1, +1, -1, +1),
    (+1, -1, +1, +1),
    (-1, +1, +1, +1),
    (-1, -1, -1, +1),
    (-1, -1, +1, -1),
    (-1, +1, -1, -1),
    (+1, -1, -1, -1),
)
_ST_ORDER = ((0, 0), (1, 0), (0, 1), (1, 1))


def chsh_coefficients(k: int) -> np.ndarray:
    """CHSH_k as an integer coefficient tensor over the table entries [s,t,x,y]."""
    if not 0 <= k <= 7:
        raise ValueError(f"CHSH variant index must be in 0..7, got {k}")
    c = np.zeros((2, 2, 2, 2), dtype=np.int64)
    for sign, (s, t) in zip(CHSH_SIGNS[k], _ST_ORDER):
        for x, y in itertools.product(range(2), repeat=2):
            c[s, t, x, y] = sign * (-1) ** (x ^ y)
    return c


_CHSH_MATRIX = np.stack([chsh_coefficients(k).reshape(-1) for k in range(8)])


def chsh_values(box: Box) -> list:
    """All eight CHSH values (Fractions, or Approx for approximate boxes)."""
    _require_2222(box)
    if box.exact:
        num, den = box.integer_form
        return [Fraction(int(v), den) for v in _CHSH_MATRIX.astype(num.dtype) @ num]
    vals = _CHSH_MATRIX @ box.as_float().reshape(-1)
    return [Approx(float(v), 16 * box.tol) for v in vals]


def chsh(box: Box, k: int = 0):
    if not 0 <= k <= 7:
        raise ValueError(f"CHSH variant index must be in 0..7, got {k}")
    return chsh_values(box)[k]


def violated_variant(box: Box) -> int | None:
    """The unique k with CHSH_k > 2, or None for a free box."""
    vals = chsh_values(box)
    hits = [k for k, v in enumerate(vals) if exceeds(v, 2)]
    if len(hits) > 1:  # impossible for valid no-signalling boxes
        raise AmbiguousBoundary(f"several CHSH variants exceed 2: {hits}")
    return hits[0] if hits else None


# ---------------------------------------------------------------------------
# deterministic boxes and the free set


def count_deterministic_boxes(box_type: BoxType) -> int:
    return box_type.x ** box_type.s * box_type.y ** box_type.t


def enumerate_deterministic_boxes(box_type: BoxType, cap: int = DEFAULT_DET_CAP) -> list[Box]:
    """All products of local deterministic strategies s -> x and t -> y."""
    n = count_deterministic_boxes(box_type)
    if n > cap:
        raise ResourceLimit(f"{n} deterministic boxes exceed the cap {cap}")
    out = []
    for fa in itertools.product(range(box_type.x), repeat=box_type.s):
        for fb in itertools.product(range(box_type.y), repeat=box_type.t):
            table = np.full(box_type.shape, Fraction(0), dtype=object)
            for s in range(box_type.s):
                for t in range(box_type.t):
                    table[s, t, fa[s], fb[t]] = Fraction(1)
            out.append(Box(box_type, table))
    return out


def coordinate_matrix(box_type: BoxType) -> np.ndarray:
    """0/1 matrix mapping a flat table to independent no-signalling coordinates.

    Coordinates are P_A(x|s) for x < |X|-1, P_B(y|t) for y < |Y|-1 and
    P(x,y|s,t) for x < |X|-1, y < |Y|-1; for no-signalling tables they
    determine every entry (8 coordinates for 2222).
    """
    bt = box_type
    idx = np.arange(bt.size).reshape(bt.shape)
    rows = []

    def row(cells):
        r = np.zeros(bt.size, dtype=np.int64)
        r[np.asarray(cells).reshape(-1)] = 1
        rows.append(r)

    for s in range(bt.s):
        for x in range(bt.x - 1):
            row(idx[s, 0, x, :])
    for t in range(bt.t):
        for y in range(bt.y - 1):
            row(idx[0, t, :, y])
    for s in range(bt.s):
        for t in range(bt.t):
            for x in range(bt.x - 1):
                for y in range(bt.y - 1):
                    row(idx[s, t, x, y])
    if not rows:
        return np.zeros((0, bt.size), dtype=np.int64)
    return np.array(rows)


def hull_contains(vertices: Sequence[Box], target: Box, tol: float | None = None) -> lp.HullResult:
    """Decide whether ``target`` is a convex combination of ``vertices``."""
    bt = target.box_type
    if any(v.box_type != bt for v in vertices):
        raise TypeMismatch("vertices and target must share a box type")
    if all(v.exact for v in vertices) and target.exact:
        G = coordinate_matrix(bt).astype(object)
        V = [G @ v.flat for v in vertices]
        return lp.exact_hull_membership(V, G @ target.flat)
    tol = tol or max([v.tol for v in (*vertices, target) if not v.exact] + [DEFAULT_TOL])
    V = np.array([v.as_float().reshape(-1) for v in vertices])
    return lp.approx_hull_membership(V, target.as_float().reshape(-1), tol)


def is_free(box: Box, *, fast: bool = False) -> bool:
    """Whether ``box`` has a classical common-cause model.

    Decided by hull membership over the deterministic boxes.  ``fast=True`` on a
    2222 box uses the eight CHSH facets instead.
    """
    if fast and box.box_type.is_2222:
        return violated_variant(box) is None
    return hull_contains(enumerate_deterministic_boxes(box.box_type), box).feasible


# ---------------------------------------------------------------------------
# mixing


def mix(boxes: Sequence[Box], weights: Sequence) -> Box:
    """Convex combination ``sum_i w_i * boxes[i]``."""
    if not boxes or len(boxes) != len(weights):
        raise WeightError("need one weight per box and at least one box")
    bt = boxes[0].box_type
    if any(b.box_type != bt for b in boxes):
        raise TypeMismatch("cannot mix boxes of different types")
    exact = all(b.exact for b in boxes) and all(is_exact(w) for w in weights)
    if exact:
        ws = [as_fraction(w) for w in weights]
        if any(w < 0 for w in ws) or sum(ws) != 1:
            raise WeightError(f"weights must be nonnegative and sum to 1, got {[str(w) for w in ws]}")
        table = sum((w * b.table for w, b in zip(ws, boxes) if w), np.zeros(bt.shape, dtype=object) + Fraction(0))
        return Box(bt, table)
    wf = [w.value if isinstance(w, Approx) else float(w) for w in weights]
    wtol = sum(w.tol for w in weights if isinstance(w, Approx))
    tol = max([b.tol for b in boxes if not b.exact] + [DEFAULT_TOL]) + wtol
    if any(w < -tol for w in wf) or abs(sum(wf) - 1) > tol * len(wf):
        raise WeightError(f"weights must be nonnegative and sum to 1, got {wf}")
    table = sum(w * b.as_float() for w, b in zip(wf, boxes))
    return Box(bt, table, tol)


def random_box(rng: np.random.Generator, denominator: int = 24, nonfree: bool | None = None,
               box_type: BoxType = T2222) -> Box:
    """A random exact no-signalling 2222 box (mixture of local and PR vertices).

    ``nonfree=True`` resamples until some CHSH value exceeds 2; ``False`` until none does.
    """
    if not box_type.is_2222:
        dets = enumerate_deterministic_boxes(box_type)
        w = rng.integers(0, denominator, size=len(dets)) * (rng.random(len(dets)) < 0.5)
        if w.sum() == 0:
            w[rng.integers(len(dets))] = 1
        return mix(dets, [Fraction(int(v), int(w.sum())) for v in w])
    from .catalog import pr_box  # local import: catalog builds on box

    dets = enumerate_deterministic_boxes(T2222)
    prs = [pr_box(k) for k in range(8)]
    while True:
        k = int(rng.integers(8))
        verts = dets + [prs[k]]
        if rng.random() < 0.3:
            verts.append(prs[int(rng.integers(8))])
        w = rng.integers(0, denominator, size=len(verts))
        w[:16] *= rng.random(16) < 0.4
        if nonfree:
            w[16] += rng.integers(1, 2 * denominator) * max(1, int(w[:16].sum()) // denominator)
        if w.sum() == 0:
            continue
        b = mix(verts, [Fraction(int(v), int(w.sum())) for v in w])
        if nonfree is None or (violated_variant(b) is not None) == nonfree:
            return b
