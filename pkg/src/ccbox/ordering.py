"""LOSR convertibility between boxes and the four-way ordering relation."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

import numpy as np

from . import lp
from .box import Box, BoxType, coordinate_matrix
from .errors import TypeMismatch
from .free_ops import DEFAULT_LDO_CAP, apply_det, enumerate_ldo, ldo_images
from .scalar import DEFAULT_TOL


class Relation(enum.Enum):
    STRICTLY_ABOVE = "strictly-above"
    STRICTLY_BELOW = "strictly-below"
    INCOMPARABLE = "incomparable"
    EQUIVALENT = "equivalent"

    def mirror(self) -> Relation:
        return _MIRROR.get(self, self)

    @classmethod
    def from_directions(cls, forward: bool, backward: bool) -> Relation:
        if forward and backward:
            return cls.EQUIVALENT
        if forward:
            return cls.STRICTLY_ABOVE
        if backward:
            return cls.STRICTLY_BELOW
        return cls.INCOMPARABLE


_MIRROR = {Relation.STRICTLY_ABOVE: Relation.STRICTLY_BELOW, Relation.STRICTLY_BELOW: Relation.STRICTLY_ABOVE}


@dataclass
class FeasibilityCertificate:
    """Outcome of one convertibility LP.

    ``weights`` pairs indices into ``enumerate_ldo(src, dst)`` with weights.
    ``witness`` is a functional on flat target tables together with a bound
    ``h``: every image scores at most ``h`` and the target scores above it.
    """

    feasible: bool
    src: BoxType
    dst: BoxType
    weights: list[tuple[int, Fraction]] | None = None
    witness: tuple[list, object] | None = None
    exact: bool = True
    n_vertices: int = 0
    method: str = ""

    def to_json(self) -> dict:
        from .scalar import fmt

        out = {"feasible": self.feasible, "exact": self.exact, "vertices": self.n_vertices,
               "method": self.method}
        if self.weights is not None:
            out["weights"] = [[i, fmt(w)] for i, w in self.weights]
        if self.witness is not None:
            c, h = self.witness
            out["witness"] = {"coefficients": [fmt(v) for v in c], "bound": fmt(h)}
        return out


def _dedup(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unique rows and the first index at which each occurs (order of first occurrence)."""
    if rows.dtype == object:
        first: dict[tuple, int] = {}
        for i, r in enumerate(map(tuple, rows)):
            first.setdefault(r, i)
        idx = np.fromiter(first.values(), dtype=np.int64, count=len(first))
    else:
        _, idx = np.unique(rows, axis=0, return_index=True)
        idx = np.sort(idx)
    return rows[idx], idx


def image_vertices(source: Box, dst_type: BoxType, cap: int = DEFAULT_LDO_CAP) -> list[Box]:
    """Distinct images of ``source`` under every LDO into ``dst_type``."""
    _, idx = _dedup(ldo_images(source, dst_type, cap))
    ops = enumerate_ldo(source.box_type, dst_type, cap)
    return [apply_det(ops[i], source) for i in idx]


@cache
def _coords(box_type: BoxType) -> np.ndarray:
    return coordinate_matrix(box_type)


def _exact_decision(vert_num, vden, target: Box, op_index) -> lp.HullResult:
    """Exact hull LP in no-signalling coordinates; returns weights keyed by op index."""
    G = _coords(target.box_type)
    if vert_num.dtype == object:
        G = G.astype(object)
    cg = vert_num @ G.T
    cg, idx = _dedup(cg)
    tnum, tden = target.integer_form
    tcg = (tnum.astype(object) @ G.T.astype(object)).tolist()
    res = lp._membership_int(cg.tolist(), vden, [int(v) for v in tcg], tden)
    if res.feasible:
        res.weights = {int(op_index[idx[j]]): w for j, w in res.weights.items()}
    else:
        c, h = res.witness
        res.witness = (list(G.T.astype(object) @ np.array(c, dtype=object)), h)
    res.extra["n_vertices"] = len(cg)
    return res


def _approx_decision(vert, target: Box, tol: float, op_index) -> lp.HullResult:
    vert, idx = _dedup(np.asarray(vert, dtype=float))
    res = lp.approx_hull_membership(vert, target.as_float().reshape(-1), tol)
    if res.feasible and res.weights is not None:
        res.weights = {int(op_index[idx[j]]): w for j, w in res.weights.items()}
    res.extra["n_vertices"] = len(vert)
    return res


def _tolerance(*boxes: Box) -> float:
    return max([b.tol for b in boxes if not b.exact] + [DEFAULT_TOL])


def convertible(source: Box, target: Box, cap: int = DEFAULT_LDO_CAP, tol: float | None = None) -> FeasibilityCertificate:
    """Can ``source`` be turned into ``target`` by local operations and shared randomness?

    Exact boxes are decided exactly; if either box is approximate the decision
    uses the tolerance band of :func:`lp.approx_hull_membership` and may raise
    :class:`ApproxUnsound`.
    """
    dst = target.box_type
    images = ldo_images(source, dst, cap)
    op_index = np.arange(len(images))
    if source.exact and target.exact:
        res = _exact_decision(images, source.integer_form[1], target, op_index)
    else:
        if source.exact:
            images = images.astype(float) / source.integer_form[1]
        res = _approx_decision(images, target, tol or _tolerance(source, target), op_index)
    weights = sorted(res.weights.items()) if res.feasible and res.weights is not None else None
    return FeasibilityCertificate(
        feasible=res.feasible, src=source.box_type, dst=dst, weights=weights,
        witness=None if res.feasible else res.witness, exact=source.exact and target.exact,
        n_vertices=res.extra.get("n_vertices", 0), method=res.method,
    )


def verify_certificate(cert: FeasibilityCertificate, source: Box, target: Box) -> bool:
    """Re-check a certificate from scratch by re-applying the operations."""
    if source.box_type != cert.src or target.box_type != cert.dst:
        raise TypeMismatch("certificate does not match the box types")
    if not cert.exact:
        return True  # approximate decisions carry no exact certificate
    if cert.feasible:
        ops = enumerate_ldo(cert.src, cert.dst)
        if any(w < 0 for _, w in cert.weights) or sum(w for _, w in cert.weights) != 1:
            return False
        acc = sum(w * apply_det(ops[i], source).table for i, w in cert.weights)
        return bool(np.all(acc == target.table))
    c, h = cert.witness
    c = np.array(c, dtype=object)
    nums, den = ldo_images(source, cert.dst).astype(object), source.integer_form[1]
    scores = nums @ c
    return bool(max(scores) <= h * den and target.flat @ c > h)


# ---------------------------------------------------------------------------
# classification


@dataclass
class Comparison:
    relation: Relation
    forward: FeasibilityCertificate
    backward: FeasibilityCertificate

    def to_json(self) -> dict:
        return {"relation": self.relation.value, "forward": self.forward.to_json(),
                "backward": self.backward.to_json()}


def compare(b1: Box, b2: Box, cap: int = DEFAULT_LDO_CAP, tol: float | None = None) -> Comparison:
    fwd = convertible(b1, b2, cap, tol)
    bwd = convertible(b2, b1, cap, tol)
    return Comparison(Relation.from_directions(fwd.feasible, bwd.feasible), fwd, bwd)


def classify(b1: Box, b2: Box, cap: int = DEFAULT_LDO_CAP, tol: float | None = None) -> Relation:
    """Relation of ``b1`` to ``b2`` (``STRICTLY_ABOVE`` means ``b1 -> b2`` only)."""
    return compare(b1, b2, cap, tol).relation


def _pair_job(args):
    i, j, b1, b2, cap, tol = args
    return i, j, classify(b1, b2, cap, tol)


def classify_matrix(boxes: list[Box], jobs: int = 1, cap: int = DEFAULT_LDO_CAP,
                    tol: float | None = None) -> list[list[Relation]]:
    """All-pairs relation matrix; the diagonal is ``EQUIVALENT`` by reflexivity.

    Only the upper triangle is solved, the lower one is its mirror. Results do
    not depend on ``jobs``.
    """
    n = len(boxes)
    out = [[Relation.EQUIVALENT] * n for _ in range(n)]
    tasks = [(i, j, boxes[i], boxes[j], cap, tol) for i in range(n) for j in range(i + 1, n)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_pair_job, tasks))
    else:
        results = [_pair_job(t) for t in tasks]
    for i, j, rel in results:
        out[i][j] = rel
        out[j][i] = rel.mirror()
    return out
