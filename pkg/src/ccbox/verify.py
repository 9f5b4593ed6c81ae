"""Acceptance checks, grouped into the suites exposed by ``ccbox verify``.

Each ``criterion_N`` returns a :class:`Criterion` holding named sub-checks with
their measured values; nothing here raises on a failed check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import analysis, catalog, monotones
from .box import (T2222, Box, BoxType, chsh, chsh_coefficients, count_deterministic_boxes,
                  enumerate_deterministic_boxes, is_free, mix, random_box)
from .free_ops import (apply_det, apply_losr, enumerate_ldo, enumerate_lso, g123, g456, identity,
                       LosrOp, orbit, reynolds_projection, subgroup_closure, tau)
from .ordering import Relation, classify, convertible, verify_certificate

F = Fraction


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Criterion:
    number: int
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, passed, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def line(self) -> str:
        failed = [c.name for c in self.checks if not c.passed]
        tail = f" (failed: {', '.join(failed)})" if failed else ""
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.title}{tail}"


@dataclass
class VerifyConfig:
    seed: int = 20240611
    n_chsh_oracle: int = 500
    n_npr_oracle: int = 200
    n_monotonicity: int = 300
    n_sensitive: int = 100
    n_orbit_pairs: int = 20
    n_family_pairs: int = 30
    n_count_types: int = 10
    npr_tol: float = 1e-6
    quantum_tol: float = 1e-6

    @classmethod
    def quick(cls) -> VerifyConfig:
        return cls(n_chsh_oracle=40, n_npr_oracle=10, n_monotonicity=40, n_sensitive=10,
                   n_orbit_pairs=4, n_family_pairs=8, n_count_types=4)


def _rng(cfg: VerifyConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


# ---------------------------------------------------------------------------


def criterion_1(cfg: VerifyConfig | None = None) -> Criterion:
    cr = Criterion(1, "local symmetry group structure")
    lso = enumerate_lso(T2222)
    cr.add("LSO order 64", len(lso) == 64, str(len(lso)))
    full = subgroup_closure([tau(i) for i in range(1, 7)])
    cr.add("tau_1..tau_6 generate the LSO", set(full) == set(lso), str(len(full)))
    a, b = g123(), g456()
    cr.add("|G_123| = 8", len(a) == 8, str(len(a)))
    cr.add("|G_456| = 8", len(b) == 8, str(len(b)))
    inter = set(a) & set(b)
    cr.add("G_123 and G_456 meet trivially", inter == {identity(T2222)}, str(len(inter)))
    pr = catalog.pr_box(0)
    cr.add("G_456 fixes PR", all(apply_det(g, pr) == pr for g in b))
    c0 = chsh_coefficients(0).reshape(-1)
    fixes = all(np.array_equal(c0 @ g.matrix, c0) for g in b)
    cr.add("G_456 fixes the CHSH_0 functional", fixes)
    orb = orbit(pr, a)
    cr.add("PR orbit under G_123 = 8 PR variants",
           orb == {catalog.pr_box(k) for k in range(8)} and len(orb) == 8, str(len(orb)))
    return cr


def _formula_ldo(src: BoxType, dst: BoxType) -> int:
    return (src.s * dst.x ** src.x) ** dst.s * (src.t * dst.y ** src.y) ** dst.t


def criterion_2(cfg: VerifyConfig | None = None) -> Criterion:
    cfg = cfg or VerifyConfig()
    cr = Criterion(2, "operation and deterministic-box counts")
    n = len(enumerate_ldo(T2222, T2222))
    cr.add("|LDO(2222 -> 2222)| = 4096", n == 4096, str(n))
    d = len(enumerate_deterministic_boxes(T2222))
    cr.add("16 deterministic 2222 boxes", d == 16, str(d))
    rng = _rng(cfg, 2)
    done = 0
    while done < cfg.n_count_types:
        src = BoxType(*(int(v) for v in rng.integers(1, 4, size=4)))
        dst = BoxType(*(int(v) for v in rng.integers(1, 4, size=4)))
        want = _formula_ldo(src, dst)
        if want > 20000:
            continue
        got = len(enumerate_ldo(src, dst))
        dets = len(enumerate_deterministic_boxes(src))
        cr.add(f"counts {src}->{dst}", got == want and dets == src.x ** src.s * src.y ** src.t
               == count_deterministic_boxes(src), f"{got}/{want}")
        done += 1
    return cr


def criterion_3(cfg: VerifyConfig | None = None) -> Criterion:
    cr = Criterion(3, "chain and boundary-mixture values")
    cr.add("CHSH_0(PR) = 4", chsh(catalog.pr_box(0), 0) == 4)
    cr.add("CHSH_0(L_NPR^b) = 2", chsh(catalog.l_npr_b(), 0) == 2)
    for i in (1, 2, 3):
        b = catalog.table3_mixture(i)
        mc, mn = monotones.m_chsh_closed(b), monotones.m_npr_closed(b)
        cr.add(f"mixture {i}: M_CHSH = 5/2, M_NPR = 3", mc == F(5, 2) and mn == 3, f"{mc}, {mn}")
    return cr


def criterion_4(cfg: VerifyConfig | None = None) -> Criterion:
    cr = Criterion(4, "boundary-mixture orderings")
    m = [catalog.table3_mixture(i) for i in (1, 2, 3)]
    r12, r23 = classify(m[0], m[1]), classify(m[1], m[2])
    cr.add("mix1 strictly above mix2", r12 is Relation.STRICTLY_ABOVE, r12.value)
    cr.add("mix2 incomparable to mix3", r23 is Relation.INCOMPARABLE, r23.value)
    for a, b in ((0, 1), (1, 2), (2, 1)):
        cert = convertible(m[a], m[b])
        cr.add(f"certificate {a + 1}->{b + 1} re-verifies", cert.exact and verify_certificate(cert, m[a], m[b]))
    return cr


def criterion_5(cfg: VerifyConfig | None = None) -> Criterion:
    cfg = cfg or VerifyConfig()
    cr = Criterion(5, "closed forms agree with oracles")
    rng = _rng(cfg, 5)
    bad = [i for i in range(cfg.n_chsh_oracle)
           if monotones.m_chsh_closed(b := random_box(rng)) != monotones.m_chsh_oracle(b)]
    cr.add(f"M_CHSH closed = oracle on {cfg.n_chsh_oracle} boxes", not bad, f"{len(bad)} mismatches")
    worst = 0.0
    for _ in range(cfg.n_npr_oracle):
        b = random_box(rng, nonfree=True)
        diff = abs(float(monotones.m_npr_closed(b) - monotones.m_npr_oracle(b)))
        worst = max(worst, diff)
    cr.add(f"M_NPR closed = oracle on {cfg.n_npr_oracle} nonfree boxes", worst <= cfg.npr_tol,
           f"max diff {worst:.3g}")
    return cr


def random_losr(rng: np.random.Generator, terms: int = 3) -> LosrOp:
    """Random mixture of deterministic 2222 operations, half of them symmetries."""
    ldo, lso = enumerate_ldo(T2222, T2222), enumerate_lso(T2222)
    k = int(rng.integers(1, terms + 1))
    ops = [lso[int(rng.integers(64))] if rng.random() < 0.5 else ldo[int(rng.integers(4096))]
           for _ in range(k)]
    w = [int(v) for v in rng.integers(1, 10, size=k)]
    return LosrOp.of([F(v, sum(w)) for v in w], ops)


_MONOTONES = {
    "M_CHSH": monotones.m_chsh_closed,
    "M_NPR": monotones.m_npr_closed,
    "nonlocal fraction": monotones.nonlocal_fraction,
    "robustness (local)": monotones.robustness_local,
    "robustness (general)": monotones.robustness_general,
}


def criterion_6(cfg: VerifyConfig | None = None) -> Criterion:
    cfg = cfg or VerifyConfig()
    cr = Criterion(6, "monotonicity under free operations")
    rng = _rng(cfg, 6)
    increases = {name: 0 for name in _MONOTONES}
    for _ in range(cfg.n_monotonicity):
        b = random_box(rng, nonfree=bool(rng.random() < 0.8))
        out = apply_losr(random_losr(rng), b)
        for name, fn in _MONOTONES.items():
            if float(fn(out) - fn(b)) > 1e-9:
                increases[name] += 1
    for name, n in increases.items():
        cr.add(f"{name} never increases", n == 0, f"{n} increases in {cfg.n_monotonicity} trials")
    return cr


def tilted_grid(n: int = 10) -> list[float]:
    """theta values in (0, pi/2], ordered by increasing tilt (decreasing theta)."""
    return [float(v) for v in np.linspace(math.pi / 2, 0.2, n)]


def criterion_7(cfg: VerifyConfig | None = None) -> Criterion:
    cfg = cfg or VerifyConfig()
    tol = cfg.quantum_tol
    cr = Criterion(7, "quantum boxes")
    t, h = catalog.tsirelson(), catalog.hardy()
    r22 = 2 * math.sqrt(2)
    mc, mn = float(monotones.m_chsh_closed(t)), float(monotones.m_npr_closed(t))
    cr.add("Tsirelson M_CHSH = M_NPR = 2 sqrt 2", abs(mc - r22) <= tol and abs(mn - r22) <= tol, f"{mc:.12g}, {mn:.12g}")
    mc = float(monotones.m_chsh_closed(h))
    cr.add("Hardy M_CHSH = 10(sqrt 5 - 2)", abs(mc - 10 * (math.sqrt(5) - 2)) <= tol, f"{mc:.12g}")
    mn = float(monotones.m_npr_closed(h))
    cr.add("Hardy M_NPR = 4", abs(mn - 4) <= tol, f"{mn:.12g}")
    grid = tilted_grid()
    chsh_vals, npr_vals, worst = [], [], 0.0
    for th in grid:
        b = catalog.tilted(th)
        chsh_vals.append(float(monotones.m_chsh_closed(b)))
        npr_vals.append(float(monotones.m_npr_closed(b)))
        worst = max(worst, abs(npr_vals[-1] - (2 * catalog.tilted_m_npr_formula(th) + 2)))
    cr.add("tilted M_NPR matches the analytic alpha", worst <= tol, f"max diff {worst:.3g}")
    cr.add("M_CHSH strictly decreases with tilt", all(a > b for a, b in zip(chsh_vals, chsh_vals[1:])))
    cr.add("M_NPR strictly increases with tilt", all(a < b for a, b in zip(npr_vals, npr_vals[1:])))
    return cr


def criterion_8(cfg: VerifyConfig | None = None) -> Criterion:
    cr = Criterion(8, "twirling onto the chain")
    pr, lnpr = catalog.pr_box(0), catalog.l_npr_b()
    cr.add("projection fixes PR", reynolds_projection(pr) == pr)
    sat = analysis.saturating_deterministic_boxes()
    cr.add("8 saturating deterministic boxes -> L_NPR^b",
           len(sat) == 8 and all(reynolds_projection(d) == lnpr for d in sat))
    grid = [F(i, 4) for i in range(5)]
    ok = True
    for anchor in (catalog.table3_box(i) for i in (1, 2, 3)):
        for a, g in itertools.product(grid, grid):
            r = analysis.family_point(a, g, anchor)
            ok &= reynolds_projection(r) == catalog.noisy_pr(a * (1 - g))
    cr.add("R(alpha, gamma) -> C(alpha (1 - gamma)) on a 5x5 grid, 3 anchors", ok)
    return cr


def criterion_9(cfg: VerifyConfig | None = None) -> Criterion:
    cfg = cfg or VerifyConfig()
    cr = Criterion(9, "sensitivity and orbitality")
    pr = catalog.pr_box(0)
    sens, cert = analysis.is_sensitive(pr)
    cr.add("PR is sensitive", sens and verify_certificate_hull(cert, pr))
    n, free = analysis.nonsymmetry_images_free(pr)
    images, _ = analysis.ldtno_images(pr)
    distinct = np.unique(images, axis=0)
    den = pr.integer_form[1]
    lp_free = all(is_free(Box(T2222, np.array([F(int(v), den) for v in r], dtype=object).reshape(2, 2, 2, 2)))
                  for r in distinct)
    cr.add("all 4032 non-symmetry images of PR are free", n == 4032 and free and lp_free,
           f"{n} images, {len(distinct)} distinct")
    rng = _rng(cfg, 9)
    nonsens = sum(not analysis.is_sensitive(random_box(rng, nonfree=True))[0] for _ in range(cfg.n_sensitive))
    cr.add(f"{cfg.n_sensitive} random nonfree boxes are sensitive", nonsens == 0, f"{nonsens} not sensitive")
    lso, ldo = enumerate_lso(T2222), enumerate_ldo(T2222, T2222)
    sym = set(lso)
    orbit_ok = other_ok = True
    for i in range(cfg.n_orbit_pairs):
        b = random_box(rng, nonfree=True)
        g = lso[int(rng.integers(64))]
        orbit_ok &= classify(b, apply_det(g, b)) is Relation.EQUIVALENT
        if i % 2:
            c = random_box(rng, nonfree=True)
        else:
            op = next(o for o in (ldo[int(j)] for j in rng.integers(4096, size=64)) if o not in sym)
            c = mix([b, apply_det(op, b)], [F(1, 2), F(1, 2)])
        if c in orbit(b, lso):
            continue
        other_ok &= classify(b, c) is not Relation.EQUIVALENT
    cr.add(f"{cfg.n_orbit_pairs} orbit pairs are equivalent", orbit_ok)
    cr.add(f"{cfg.n_orbit_pairs} non-orbit pairs are not equivalent", other_ok)
    return cr


def verify_certificate_hull(cert, box: Box) -> bool:
    """Exact re-check of a sensitivity certificate against the non-symmetry images."""
    if cert.feasible or cert.witness is None:
        return False
    c, h = cert.witness
    images, _ = analysis.ldtno_images(box)
    c = np.array(c, dtype=object)
    den = box.integer_form[1]
    return max(images.astype(object) @ c) <= h * den and box.flat @ c > h


def criterion_10(cfg: VerifyConfig | None = None) -> Criterion:
    cr = Criterion(10, "preorder structure on the two-parameter family")
    try:
        w = analysis.non_transitivity_witness()
        ok = True
    except AssertionError:
        ok = False
    cr.add("non-transitivity witness", ok)
    if ok:
        m = [(monotones.m_chsh_closed(b), monotones.m_npr_closed(b)) for b in w]
        cr.add("witness monotones cross", m[0][0] > m[1][0] and m[1][1] > m[0][1], str(m))
        wt = analysis.witness_mixing_weight()
        cr.add("R3 is a mixture of R1 and L1bb", mix([w.r1, catalog.table3_box(1)], [wt, 1 - wt]) == w.r3, str(wt))
    chain = analysis.chain_subset([F(1, 10), F(3, 10), F(1, 2), F(7, 10), F(9, 10)])
    cr.add("5 chain elements form a chain", analysis.certify_chain(chain))
    cr.add("5-anchor constant-M_CHSH slice forms an antichain", analysis.certify_antichain(analysis.anchor_slice()))
    ok, bad = True, []
    for anchor in (catalog.table3_box(i) for i in (1, 2, 3)):
        for a, g, mc, mn in analysis.family_monotone_grid(anchor, 9):
            want_npr = 2 * a + 2 if g < 1 else F(2)
            if mc != 2 * a * (1 - g) + 2 or mn != want_npr:
                ok = False
                bad.append((a, g))
    cr.add("family closed forms on a 9x9 grid, 3 anchors", ok, f"{len(bad)} mismatches")
    return cr


def criterion_11(cfg: VerifyConfig | None = None) -> Criterion:
    cfg = cfg or VerifyConfig()
    cr = Criterion(11, "monotone pair is complete on the family")
    rng = _rng(cfg, 11)
    mismatches = 0
    for _ in range(cfg.n_family_pairs):
        anchor = catalog.table3_box(int(rng.integers(1, 4)))
        pts = [analysis.family_point(F(int(rng.integers(0, 11)), 10), F(int(rng.integers(0, 11)), 10), anchor)
               for _ in range(2)]
        lp = convertible(pts[0], pts[1]).feasible
        m = [(monotones.m_chsh_closed(b), monotones.m_npr_closed(b)) for b in pts]
        mono = m[0][0] >= m[1][0] and m[0][1] >= m[1][1]
        mismatches += lp != mono
    cr.add(f"LP agrees with monotones on {cfg.n_family_pairs} pairs", mismatches == 0, f"{mismatches} mismatches")
    return cr


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}

SUITES = {
    "group": (1,),
    "counts": (2,),
    "tables": (3, 4, 7),
    "monotones": (5, 6),
    "appendixB": (8, 9),
    "preorder": (10, 11),
    "all": tuple(range(1, 12)),
}


def run_suite(name: str, cfg: VerifyConfig | None = None) -> list[Criterion]:
    return [CRITERIA[i](cfg) for i in SUITES[name]]
