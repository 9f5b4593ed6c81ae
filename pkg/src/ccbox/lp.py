"""Convex-hull membership with exact certificates.

The question "is ``t`` a convex combination of the rows of ``V``?" is the only
linear program the library ever solves.  For exact (integer/rational) data the
answer is always backed by an exactly verified certificate:

* feasible: nonnegative rational weights reproducing ``t`` exactly;
* infeasible: a rational functional ``c`` and bound ``h`` with ``c.v <= h`` for
  every vertex ``v`` and ``c.t > h``.

HiGHS (through scipy) is used only to *guess* the support of a solution or a
separating functional; every guess is re-checked in exact arithmetic and, if the
check fails, an integer-preserving simplex decides the instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .errors import ApproxUnsound
from .scalar import MARGIN

# consecutive degenerate pivots tolerated before switching to Bland's rule
_DEGENERATE_LIMIT = 50


@dataclass
class HullResult:
    feasible: bool
    # vertex row index -> weight; exact Fractions, or floats for approximate data
    weights: dict[int, Fraction] | None = None
    # separating functional (coefficients, bound) in the caller's coordinates
    witness: tuple[list[Fraction], Fraction] | None = None
    method: str = ""
    distance_upper: float | None = None
    distance_lower: float | None = None
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# integer-preserving simplex


def exact_phase_one(A, b):
    """Decide ``A w = b, w >= 0`` exactly with an integer-preserving simplex.

    ``A`` is an ``m x n`` matrix and ``b`` a length-``m`` vector of Python ints.
    Returns ``("feasible", {col: Fraction})`` or ``("infeasible", y)`` where the
    Farkas vector ``y`` (Fractions) satisfies ``y.A <= 0`` columnwise and
    ``y.b > 0``.
    """
    A = [[int(v) for v in row] for row in A]
    b = [int(v) for v in b]
    m = len(A)
    n = len(A[0]) if m else 0
    sign = [(-1 if bi < 0 else 1) for bi in b]

    T = np.zeros((m + 1, n + m + 1), dtype=object)
    T[:, :] = 0
    for i in range(m):
        T[i, :n] = [sign[i] * v for v in A[i]]
        T[i, n + i] = 1
        T[i, -1] = sign[i] * b[i]
    T[m, :n] = -T[:m, :n].sum(axis=0)
    T[m, -1] = -T[:m, -1].sum()
    basis = [n + i for i in range(m)]
    D = 1
    degenerate = 0

    while True:
        cost = T[m, :n]
        if degenerate < _DEGENERATE_LIMIT:
            # Dantzig pricing; ties go to the lowest index
            j = int(np.argmin(cost))
            q = j if cost[j] < 0 else None
        else:
            # Bland's rule once progress stalls, which rules out cycling
            q = next((j for j in range(n) if cost[j] < 0), None)
        if q is None:
            break
        p = None
        for i in range(m):
            a = T[i, q]
            if a > 0:
                if p is None:
                    p = i
                    continue
                # compare T[i,-1]/a with T[p,-1]/T[p,q]
                lhs = T[i, -1] * T[p, q]
                rhs = T[p, -1] * a
                if lhs < rhs or (lhs == rhs and basis[i] < basis[p]):
                    p = i
        if p is None:  # pragma: no cover - phase one is always bounded
            raise RuntimeError("unbounded phase-one problem")
        degenerate = degenerate + 1 if T[p, -1] == 0 else 0
        piv = T[p, q]
        prow = T[p].copy()
        col = T[:, q].copy()
        T = (piv * T - np.outer(col, prow)) // D
        T[p] = prow
        D = piv
        basis[p] = q

    if T[m, -1] == 0:
        weights = {}
        for i, j in enumerate(basis):
            if j < n and T[i, -1] != 0:
                weights[j] = Fraction(T[i, -1], D)
        return "feasible", weights
    y = [sign[i] * (1 - Fraction(T[m, n + i], D)) for i in range(m)]
    return "infeasible", y


# ---------------------------------------------------------------------------
# exact hull membership


def _lcm_den(values) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d


def _check_weights(Vn, vden, tn, tden, weights) -> bool:
    if any(w < 0 for w in weights.values()) or sum(weights.values()) != 1:
        return False
    d = len(tn)
    acc = [Fraction(0)] * d
    for i, w in weights.items():
        row = Vn[i]
        for k in range(d):
            if row[k]:
                acc[k] += w * row[k]
    return all(acc[k] * tden == Fraction(tn[k]) * vden for k in range(d))


def _check_witness(Vn, vden, tn, tden, c) -> tuple[bool, Fraction]:
    L = _lcm_den(c)
    ci = [int(x * L) for x in c]
    h = max(sum(a * b for a, b in zip(row, ci) if a and b) for row in Vn)
    ct = sum(a * b for a, b in zip(tn, ci) if a and b)
    # c.v/vden <= h/vden  versus  c.t/tden
    ok = ct * vden > h * tden
    return ok, Fraction(h, L * vden)


def _system(Vn, vden, tn, tden):
    d = len(tn)
    A = [[row[k] * tden for row in Vn] for k in range(d)]
    A.append([1] * len(Vn))
    b = [tn[k] * vden for k in range(d)] + [1]
    return A, b


def _exact_solve(Vn, vden, tn, tden, cols=None) -> HullResult:
    cols = list(range(len(Vn))) if cols is None else list(cols)
    A, b = _system([Vn[j] for j in cols], vden, tn, tden)
    status, payload = exact_phase_one(A, b)
    if status == "feasible":
        return HullResult(True, weights={cols[j]: w for j, w in payload.items()}, method="exact-simplex")
    y = payload
    d = len(tn)
    # y.A <= 0 and y.b > 0 ;  y = (y_c, y0):  tden * y_c.v + y0 <= 0 < vden * y_c.t + y0
    c = [Fraction(v) for v in y[:d]]
    return HullResult(False, witness=(c, None), method="exact-simplex")


def exact_hull_membership(V, t, *, guided: bool = True) -> HullResult:
    """Is ``t`` in the convex hull of the rows of ``V``?  All data exact rationals.

    ``V`` is an iterable of rows of ints/Fractions, ``t`` a sequence of the same
    length.  The returned certificate has been verified exactly.
    """
    V = [list(row) for row in V]
    if not V:
        return HullResult(False, method="empty")
    vden = _lcm_den(x for row in V for x in row)
    tden = _lcm_den(t)
    Vn = [[int(Fraction(x) * vden) for x in row] for row in V]
    tn = [int(Fraction(x) * tden) for x in t]
    return _membership_int(Vn, vden, tn, tden, guided=guided)


def _membership_int(Vn, vden, tn, tden, *, guided=True) -> HullResult:
    d = len(tn)
    if d == 0:
        return HullResult(True, weights={0: Fraction(1)}, method="trivial")
    result = None
    if guided:
        result = _guided(Vn, vden, tn, tden)
    if result is None:
        result = _exact_solve(Vn, vden, tn, tden)
    if result.feasible:
        assert _check_weights(Vn, vden, tn, tden, result.weights)
    else:
        c = result.witness[0]
        ok, h = _check_witness(Vn, vden, tn, tden, c)
        if not ok:
            # Farkas vector from the simplex always separates; reaching here is a bug
            raise AssertionError("separating functional failed exact verification")
        result.witness = (c, h)
    return result


def _guided(Vn, vden, tn, tden) -> HullResult | None:
    Vf = np.array(Vn, dtype=float) / vden
    tf = np.array(tn, dtype=float) / tden
    N, d = Vf.shape
    A_eq = np.vstack([Vf.T, np.ones((1, N))])
    b_eq = np.concatenate([tf, [1.0]])
    res = linprog(np.zeros(N), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status == 0:
        w = res.x
        cols = [int(j) for j in np.argsort(-w)[: d + 1] if w[j] > 1e-12]
        if cols:
            sub = _exact_solve(Vn, vden, tn, tden, cols=sorted(cols))
            if sub.feasible:
                sub.method = "guided"
                return sub
        return None
    if res.status == 2:
        c = _separating_float(Vf, tf)
        if c is None:
            return None
        for limit in (10**6, 10**12):
            cr = [Fraction(float(x)).limit_denominator(limit) for x in c]
            if not any(cr):
                continue
            ok, h = _check_witness(Vn, vden, tn, tden, cr)
            if ok:
                return HullResult(False, witness=(cr, h), method="guided")
    return None


def _separating_float(Vf, tf):
    """Max-margin functional with ``|c|_inf <= 1``; None if no positive margin."""
    N, d = Vf.shape
    cost = np.concatenate([-tf, [1.0]])
    A_ub = np.hstack([Vf, -np.ones((N, 1))])
    bounds = [(-1, 1)] * d + [(None, None)]
    res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(N), bounds=bounds, method="highs")
    if res.status != 0 or -res.fun <= 0:
        return None
    return res.x[:d]


# ---------------------------------------------------------------------------
# approximate hull membership


def approx_hull_membership(V, t, tol: float) -> HullResult:
    """Hull membership for floating data with an honest tolerance band.

    Feasible when the sup-norm distance from ``t`` to the hull is at most
    ``tol``; infeasible when a separating functional certifies a distance above
    ``MARGIN * tol``; otherwise :class:`ApproxUnsound` is raised.
    """
    V = np.asarray(V, dtype=float)
    t = np.asarray(t, dtype=float)
    N, d = V.shape
    # min eps  s.t.  -eps <= V^T w - t <= eps,  sum w = 1,  w >= 0
    cost = np.zeros(N + 1)
    cost[-1] = 1.0
    A_ub = np.vstack([
        np.hstack([V.T, -np.ones((d, 1))]),
        np.hstack([-V.T, -np.ones((d, 1))]),
    ])
    b_ub = np.concatenate([t, -t])
    A_eq = np.concatenate([np.ones(N), [0.0]])[None, :]
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * N + [(0, None)], method="highs")
    upper = math.inf
    weights = None
    if res.status == 0:
        w = np.clip(res.x[:N], 0, None)
        w = w / w.sum()
        upper = float(np.max(np.abs(V.T @ w - t)))
        weights = {int(j): float(w[j]) for j in np.nonzero(w > 0)[0]}
    if upper <= tol:
        return HullResult(True, weights=weights, method="approx", distance_upper=upper)

    # separation with |c|_1 <= 1 lower-bounds the sup-norm distance
    cost = np.concatenate([-t, t, [1.0]])
    A_ub = np.vstack([
        np.hstack([V, -V, -np.ones((N, 1))]),
        np.concatenate([np.ones(2 * d), [0.0]])[None, :],
    ])
    b_ub = np.concatenate([np.zeros(N), [1.0]])
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub,
                  bounds=[(0, None)] * (2 * d) + [(None, None)], method="highs")
    lower = 0.0
    c = None
    if res.status == 0:
        c = res.x[:d] - res.x[d:2 * d]
        norm = np.abs(c).sum()
        if norm > 0:
            lower = float((c @ t - np.max(V @ c)) / norm)
    if lower > MARGIN * tol:
        h = float(np.max(V @ c))
        return HullResult(False, witness=(list(map(float, c)), h), method="approx",
                          distance_upper=upper, distance_lower=lower)
    raise ApproxUnsound(
        f"hull distance in [{lower:.3g}, {upper:.3g}] is inside the tolerance band "
        f"({tol:.3g}, {MARGIN * tol:.3g}]"
    )
