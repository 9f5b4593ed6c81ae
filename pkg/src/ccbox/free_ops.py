"""Locally deterministic operations, the local symmetry group, and LOSR mixtures.

A wing operation is the pair ``(f, g)``: the target setting ``s'`` is fed to the
source box as ``s = f[s']`` and the source outcome ``x`` is relabelled as
``x' = g[x][s']``.  A :class:`DetOp` is one such pair per wing.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property
from typing import Iterable, Sequence

import numpy as np

from .box import T2222, Box, BoxType, mix
from .errors import NotInvertible, ResourceLimit, TypeMismatch, WeightError, WrongType
from .scalar import as_fraction

DEFAULT_LDO_CAP = 10**6


@dataclass(frozen=True)
class WingDetOp:
    f: tuple[int, ...]  # f[s'] = s
    g: tuple[tuple[int, ...], ...]  # g[x][s'] = x'

    def check(self, n_src_set: int, n_src_out: int, n_dst_set: int, n_dst_out: int) -> None:
        if len(self.f) != n_dst_set or any(not 0 <= v < n_src_set for v in self.f):
            raise TypeMismatch(f"pre-map {self.f} incompatible with settings {n_src_set}->{n_dst_set}")
        if len(self.g) != n_src_out or any(len(r) != n_dst_set for r in self.g):
            raise TypeMismatch(f"post-map shape does not match {n_src_out}x{n_dst_set}")
        if any(not 0 <= v < n_dst_out for r in self.g for v in r):
            raise TypeMismatch(f"post-map {self.g} produces outcomes outside 0..{n_dst_out - 1}")

    def matrix(self, n_src_set: int, n_src_out: int) -> np.ndarray:
        """0/1 tensor M[s', x', s, x] of the wing's action."""
        n_dst_set = len(self.f)
        n_dst_out = 1 + max((v for r in self.g for v in r), default=0)
        return self._matrix(n_src_set, n_src_out, n_dst_out)

    def _matrix(self, n_src_set, n_src_out, n_dst_out) -> np.ndarray:
        M = np.zeros((len(self.f), n_dst_out, n_src_set, n_src_out), dtype=np.int64)
        for sp, s in enumerate(self.f):
            for x in range(n_src_out):
                M[sp, self.g[x][sp], s, x] = 1
        return M

    def is_bijective(self, n_src_set: int, n_src_out: int, n_dst_out: int) -> bool:
        """Whether (x, s') -> (x', s) is a bijection."""
        if n_src_set != len(self.f) or n_src_out != n_dst_out:
            return False
        seen = {(self.g[x][sp], self.f[sp]) for sp in range(len(self.f)) for x in range(n_src_out)}
        return len(seen) == n_src_set * n_src_out


def wing_identity(n_set: int, n_out: int) -> WingDetOp:
    return WingDetOp(tuple(range(n_set)), tuple(tuple(x for _ in range(n_set)) for x in range(n_out)))


@dataclass(frozen=True)
class DetOp:
    src: BoxType
    dst: BoxType
    wing_a: WingDetOp
    wing_b: WingDetOp

    def __post_init__(self):
        self.wing_a.check(self.src.s, self.src.x, self.dst.s, self.dst.x)
        self.wing_b.check(self.src.t, self.src.y, self.dst.t, self.dst.y)

    @property
    def canonical(self) -> tuple:
        return (self.wing_a.f, self.wing_a.g, self.wing_b.f, self.wing_b.g)

    @cached_property
    def tensors(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            self.wing_a._matrix(self.src.s, self.src.x, self.dst.x),
            self.wing_b._matrix(self.src.t, self.src.y, self.dst.y),
        )

    @cached_property
    def matrix(self) -> np.ndarray:
        """0/1 matrix acting on flat [s,t,x,y] tables (dst.size x src.size)."""
        MA, MB = self.tensors
        M = np.einsum("SXsx,TYty->STXYstxy", MA, MB)
        return M.reshape(self.dst.size, self.src.size)

    @property
    def is_type_preserving(self) -> bool:
        return self.src == self.dst

    @property
    def is_symmetry(self) -> bool:
        return (
            self.is_type_preserving
            and self.wing_a.is_bijective(self.src.s, self.src.x, self.dst.x)
            and self.wing_b.is_bijective(self.src.t, self.src.y, self.dst.y)
        )

    def __repr__(self):
        return f"DetOp({self.src}->{self.dst}, fA={self.wing_a.f}, gA={self.wing_a.g}, fB={self.wing_b.f}, gB={self.wing_b.g})"


def identity(box_type: BoxType) -> DetOp:
    return DetOp(box_type, box_type, wing_identity(box_type.s, box_type.x), wing_identity(box_type.t, box_type.y))


@dataclass(frozen=True)
class LosrOp:
    """Convex combination of deterministic operations (shared randomness as weights)."""

    terms: tuple[tuple[Fraction, DetOp], ...]

    def __post_init__(self):
        if not self.terms:
            raise WeightError("an LOSR operation needs at least one term")
        ws = [w for w, _ in self.terms]
        if any(w < 0 for w in ws) or sum(ws) != 1:
            raise WeightError("LOSR weights must be nonnegative and sum to 1")
        src, dst = self.terms[0][1].src, self.terms[0][1].dst
        if any(op.src != src or op.dst != dst for _, op in self.terms):
            raise TypeMismatch("all terms of an LOSR operation must share source and target types")

    @classmethod
    def of(cls, weights: Iterable, ops: Iterable[DetOp]) -> LosrOp:
        return cls(tuple((as_fraction(w), op) for w, op in zip(weights, ops)))

    @property
    def src(self) -> BoxType:
        return self.terms[0][1].src

    @property
    def dst(self) -> BoxType:
        return self.terms[0][1].dst


# ---------------------------------------------------------------------------
# application


def apply_det(op: DetOp, box: Box) -> Box:
    if box.box_type != op.src:
        raise TypeMismatch(f"operation expects a {op.src} box, got {box.box_type}")
    MA, MB = op.tensors
    P = box.table if box.exact else box.as_float()
    if box.exact:
        MA, MB = MA.astype(object), MB.astype(object)
    out = np.tensordot(MA, P, axes=([2, 3], [0, 2]))  # S X t y
    out = np.tensordot(MB, out, axes=([2, 3], [2, 3]))  # T Y S X
    out = out.transpose(2, 0, 3, 1)
    return Box(op.dst, out, box.tol)


def apply_losr(op: LosrOp, box: Box) -> Box:
    if box.box_type != op.src:
        raise TypeMismatch(f"operation expects a {op.src} box, got {box.box_type}")
    return mix([apply_det(o, box) for _, o in op.terms], [w for w, _ in op.terms])


def compose(op2: DetOp, op1: DetOp) -> DetOp:
    """The operation "apply ``op1``, then ``op2``"."""
    if op1.dst != op2.src:
        raise TypeMismatch(f"cannot compose {op1.src}->{op1.dst} with {op2.src}->{op2.dst}")

    def wing(w1: WingDetOp, w2: WingDetOp, n_src_out: int) -> WingDetOp:
        f = tuple(w1.f[w2.f[sp]] for sp in range(len(w2.f)))
        g = tuple(
            tuple(w2.g[w1.g[x][w2.f[sp]]][sp] for sp in range(len(w2.f))) for x in range(n_src_out)
        )
        return WingDetOp(f, g)

    return DetOp(
        op1.src,
        op2.dst,
        wing(op1.wing_a, op2.wing_a, op1.src.x),
        wing(op1.wing_b, op2.wing_b, op1.src.y),
    )


def inverse(op: DetOp) -> DetOp:
    if not op.is_symmetry:
        raise NotInvertible(f"{op!r} is not a local symmetry")

    def wing(w: WingDetOp, n_out: int) -> WingDetOp:
        n_set = len(w.f)
        finv = [0] * n_set
        for sp, s in enumerate(w.f):
            finv[s] = sp
        ginv = [[0] * n_set for _ in range(n_out)]
        for s in range(n_set):
            sp = finv[s]
            for x in range(n_out):
                ginv[w.g[x][sp]][s] = x
        return WingDetOp(tuple(finv), tuple(tuple(r) for r in ginv))

    return DetOp(op.src, op.dst, wing(op.wing_a, op.src.x), wing(op.wing_b, op.src.y))


# ---------------------------------------------------------------------------
# enumeration


def wing_count(n_src_set: int, n_src_out: int, n_dst_set: int, n_dst_out: int) -> int:
    return (n_src_set * n_dst_out**n_src_out) ** n_dst_set


def ldo_count(src: BoxType, dst: BoxType) -> int:
    return wing_count(src.s, src.x, dst.s, dst.x) * wing_count(src.t, src.y, dst.t, dst.y)


def lso_order(box_type: BoxType) -> int:
    from math import factorial as fact

    bt = box_type
    return fact(bt.s) * fact(bt.x) ** bt.s * fact(bt.t) * fact(bt.y) ** bt.t


def _wing_ops(n_src_set, n_src_out, n_dst_set, n_dst_out) -> list[WingDetOp]:
    ops = []
    for f in itertools.product(range(n_src_set), repeat=n_dst_set):
        for flat in itertools.product(range(n_dst_out), repeat=n_src_out * n_dst_set):
            g = tuple(tuple(flat[x * n_dst_set:(x + 1) * n_dst_set]) for x in range(n_src_out))
            ops.append(WingDetOp(f, g))
    return ops


@cache
def wing_tables(src: BoxType, dst: BoxType) -> tuple[list[WingDetOp], list[WingDetOp], np.ndarray, np.ndarray]:
    """Per-wing operation lists and their stacked action tensors."""
    wa = _wing_ops(src.s, src.x, dst.s, dst.x)
    wb = _wing_ops(src.t, src.y, dst.t, dst.y)
    MA = np.stack([w._matrix(src.s, src.x, dst.x) for w in wa])
    MB = np.stack([w._matrix(src.t, src.y, dst.y) for w in wb])
    return wa, wb, MA, MB


def enumerate_ldo(src: BoxType, dst: BoxType, cap: int = DEFAULT_LDO_CAP) -> list[DetOp]:
    """Every locally deterministic operation src -> dst.

    Index ``i * nB + j`` pairs the i-th wing-A map with the j-th wing-B map;
    :func:`ldo_images` uses the same order.
    """
    n = ldo_count(src, dst)
    if n > cap:
        raise ResourceLimit(f"{n} deterministic operations exceed the cap {cap}")
    wa, wb, _, _ = wing_tables(src, dst)
    return [DetOp(src, dst, a, b) for a in wa for b in wb]


def ldo_images(box: Box, dst: BoxType, cap: int = DEFAULT_LDO_CAP) -> np.ndarray:
    """Images of ``box`` under every LDO, as flat rows in :func:`enumerate_ldo` order.

    Exact boxes give integer numerator rows over ``box.integer_form[1]``;
    approximate boxes give float rows.
    """
    n = ldo_count(box.box_type, dst)
    if n > cap:
        raise ResourceLimit(f"{n} deterministic operations exceed the cap {cap}")
    _, _, MA, MB = wing_tables(box.box_type, dst)
    if box.exact:
        num, _ = box.integer_form
        P = num.reshape(box.box_type.shape)
        if P.dtype == object:
            MA, MB = MA.astype(object), MB.astype(object)
    else:
        P = box.as_float()
    tmp = np.tensordot(MA, P, axes=([3, 4], [0, 2]))  # a S X t y
    out = np.tensordot(MB, tmp, axes=([3, 4], [3, 4]))  # b T Y a S X
    out = out.transpose(3, 0, 4, 1, 5, 2)  # a b S T X Y
    return out.reshape(n, dst.size)


def enumerate_lso(box_type: BoxType, cap: int = DEFAULT_LDO_CAP) -> list[DetOp]:
    """The local symmetry group of ``box_type`` (invertible type-preserving LDOs)."""
    n = wing_count(box_type.s, box_type.x, box_type.s, box_type.x) * wing_count(
        box_type.t, box_type.y, box_type.t, box_type.y)
    if n > cap:
        raise ResourceLimit(f"{n} candidate operations exceed the cap {cap}")
    wa, wb, _, _ = wing_tables(box_type, box_type)
    wa = [w for w in wa if w.is_bijective(box_type.s, box_type.x, box_type.x)]
    wb = [w for w in wb if w.is_bijective(box_type.t, box_type.y, box_type.y)]
    return [DetOp(box_type, box_type, a, b) for a in wa for b in wb]


def subgroup_closure(generators: Sequence[DetOp]) -> list[DetOp]:
    """The group generated by ``generators``, identity first, in BFS order."""
    if not generators:
        raise ValueError("need at least one generator")
    bt = generators[0].src
    for g in generators:
        if g.src != bt or g.dst != bt:
            raise TypeMismatch("generators must share one type-preserving type")
        if not g.is_symmetry:
            raise NotInvertible(f"generator {g!r} is not invertible")
    e = identity(bt)
    seen = {e: None}
    queue = deque([e])
    while queue:
        h = queue.popleft()
        for g in generators:
            k = compose(g, h)
            if k not in seen:
                seen[k] = None
                queue.append(k)
    return list(seen)


def orbit(box: Box, group: Sequence[DetOp]) -> set[Box]:
    return {apply_det(g, box) for g in group}


# ---------------------------------------------------------------------------
# the six named 2222 symmetries


def _xor_table(flip_by_setting: bool = False, const: int = 0) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(x ^ const ^ (sp if flip_by_setting else 0) for sp in range(2)) for x in range(2))


_ID = (0, 1)
_SWAP = (1, 0)
_G_ID = _xor_table()


@cache
def tau(i: int) -> DetOp:
    """The 2222 relabellings tau_1..tau_6.

    tau_1: y -> y+1; tau_2: s -> s+1; tau_3: t -> t+1; tau_4: x,y -> x+1,y+1;
    tau_5: x -> x+s together with t -> t+1; tau_6: y -> y+t together with s -> s+1.
    """
    a = {
        1: (_ID, _G_ID), 2: (_SWAP, _G_ID), 3: (_ID, _G_ID), 4: (_ID, _xor_table(const=1)),
        5: (_ID, _xor_table(flip_by_setting=True)), 6: (_SWAP, _G_ID),
    }
    b = {
        1: (_ID, _xor_table(const=1)), 2: (_ID, _G_ID), 3: (_SWAP, _G_ID), 4: (_ID, _xor_table(const=1)),
        5: (_SWAP, _G_ID), 6: (_ID, _xor_table(flip_by_setting=True)),
    }
    if i not in a:
        raise ValueError(f"tau index must be 1..6, got {i}")
    return DetOp(T2222, T2222, WingDetOp(*a[i]), WingDetOp(*b[i]))


@cache
def g123() -> tuple[DetOp, ...]:
    return tuple(subgroup_closure([tau(1), tau(2), tau(3)]))


@cache
def g456() -> tuple[DetOp, ...]:
    return tuple(subgroup_closure([tau(4), tau(5), tau(6)]))


def variant_op(k: int) -> DetOp:
    """The element of G_123 sending CHSH_0 (and the canonical PR box) to variant k.

    tau_2 toggles bit 0 of k, tau_3 bit 1 and tau_1 bit 2.
    """
    if not 0 <= k <= 7:
        raise ValueError(f"variant index must be in 0..7, got {k}")
    op = identity(T2222)
    for bit, i in ((0, 2), (1, 3), (2, 1)):
        if k >> bit & 1:
            op = compose(tau(i), op)
    return op


def reynolds_projection(box: Box) -> Box:
    """Uniform average of ``box`` over G_456 (the stabiliser of CHSH_0)."""
    if not box.box_type.is_2222:
        raise WrongType(f"projection is defined for 2222 boxes, got {box.box_type}")
    group = g456()
    return mix([apply_det(g, box) for g in group], [Fraction(1, len(group))] * len(group))


def reynolds_op() -> LosrOp:
    group = g456()
    return LosrOp.of([Fraction(1, len(group))] * len(group), group)
