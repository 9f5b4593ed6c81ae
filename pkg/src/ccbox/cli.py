"""``ccbox`` command line: JSON payloads on stdout, diagnostics on stderr."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analysis, catalog, monotones
from .errors import AmbiguousBoundary, ApproxUnsound, CCBoxError, FreeBoxClass
from .free_ops import DEFAULT_LDO_CAP
from .io import box_to_json, load_box, rows_to_csv
from .ordering import classify_matrix, compare
from .scalar import DEFAULT_TOL, fmt

EXIT_OK, EXIT_FAIL, EXIT_UNSOUND = 0, 1, 2


@dataclass
class CliConfig:
    tol: float = DEFAULT_TOL
    ldo_cap: int = DEFAULT_LDO_CAP
    jobs: int = 1


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=1)
    sys.stdout.write("\n")


def _value(v) -> str:
    if isinstance(v, float) and math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return fmt(v)


def _load(path, cfg: CliConfig):
    box = load_box(path)
    if not box.exact and box.tol < cfg.tol:
        from .box import Box

        box = Box(box.box_type, box.as_float(), cfg.tol)
    return box


# ---------------------------------------------------------------------------


def cmd_compare(args, cfg: CliConfig) -> int:
    if args.matrix:
        paths = sorted(args.paths)
        boxes = [_load(p, cfg) for p in paths]
        M = classify_matrix(boxes, jobs=cfg.jobs, cap=cfg.ldo_cap, tol=cfg.tol)
        _emit({"files": paths, "matrix": [[r.value for r in row] for row in M]})
        return EXIT_OK
    if len(args.paths) != 2:
        raise CCBoxError("compare needs exactly two files (or --matrix)")
    a, b = (_load(p, cfg) for p in args.paths)
    _emit(compare(a, b, cap=cfg.ldo_cap, tol=cfg.tol).to_json())
    return EXIT_OK


_WHICH = {
    "chsh": (monotones.m_chsh_closed, monotones.m_chsh_oracle),
    "npr": (monotones.m_npr_closed, monotones.m_npr_oracle),
    "nf": (monotones.nonlocal_fraction, None),
    "rbl": (monotones.robustness_local, None),
    "rbg": (monotones.robustness_general, None),
}


def cmd_monotone(args, cfg: CliConfig) -> int:
    box = _load(args.path, cfg)
    closed, oracle = _WHICH[args.which]
    if args.oracle:
        if oracle is None:
            raise CCBoxError(f"no oracle for {args.which}; it is a formula in M_CHSH")
        payload = {"value": _value(oracle(box)), "method": "oracle"}
    else:
        payload = {"value": _value(closed(box)), "method": "closed"}
        if args.which == "npr":
            dec = monotones.npr_decomposition(box)
            if dec is not None:
                payload["decomposition"] = {
                    "alpha": _value(dec.alpha), "gamma": _value(dec.gamma), "variant": dec.variant,
                    "boundary_box": None if dec.boundary_box is None else box_to_json(dec.boundary_box),
                }
    _emit(payload)
    return EXIT_OK


def cmd_catalog(args, cfg: CliConfig) -> int:
    box = catalog.build(args.name, k=args.k, alpha=args.alpha, theta=args.theta, tol=cfg.tol)
    doc = box_to_json(box)
    if args.output:
        Path(args.output).write_text(json.dumps(doc, indent=1) + "\n")
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        _emit(doc)
    return EXIT_OK


def cmd_analyze(args, cfg: CliConfig) -> int:
    if args.what == "sensitivity":
        box = _load(args.paths[0], cfg)
        sens, cert = analysis.is_sensitive(box, cap=cfg.ldo_cap)
        _emit({"sensitive": sens, "certificate": cert.to_json()})
    elif args.what == "class":
        box = _load(args.paths[0], cfg)
        try:
            members = analysis.equivalence_class(box)
        except FreeBoxClass:
            _emit({"class": "free", "size": None})
            return EXIT_OK
        members = sorted(members, key=lambda b: b.key)
        _emit({"class": "orbit", "size": len(members), "members": [box_to_json(b) for b in members]})
    elif args.what == "family":
        anchor = catalog.build(args.anchor)
        rows = analysis.family_monotone_grid(anchor, args.grid)
        _emit({"anchor": args.anchor, "rows": [[_value(v) for v in r] for r in rows]})
    elif args.what == "antichain":
        paths = sorted(args.paths)
        boxes = [_load(p, cfg) for p in paths]
        _emit({"files": paths, "antichain": analysis.certify_antichain(boxes, jobs=cfg.jobs),
               "chain": analysis.certify_chain(boxes, jobs=cfg.jobs)})
    return EXIT_OK


def cmd_plotdata(args, cfg: CliConfig) -> int:
    if args.which == "family":
        anchor = catalog.build(args.anchor)
        rows = analysis.family_monotone_grid(anchor, args.grid)
        sys.stdout.write(rows_to_csv(["alpha", "gamma", "M_CHSH", "M_NPR"], rows))
    else:
        n = args.grid
        thetas = [math.pi / 2 * (i + 1) / n for i in range(n)]
        rows = []
        for th in thetas:
            b = catalog.tilted(th, cfg.tol)
            rows.append((th, float(monotones.m_chsh_closed(b)), float(monotones.m_npr_closed(b))))
        sys.stdout.write(rows_to_csv(["theta", "M_CHSH", "M_NPR"], rows))
    return EXIT_OK


def cmd_verify(args, cfg: CliConfig) -> int:
    from .verify import VerifyConfig, run_suite

    vcfg = VerifyConfig.quick() if args.quick else VerifyConfig()
    results = run_suite(args.suite, vcfg)
    for cr in results:
        print(cr.line(), file=sys.stderr)
    _emit({"suite": args.suite, "passed": all(c.passed for c in results), "criteria": [
        {"number": c.number, "title": c.title, "passed": c.passed,
         "checks": [{"name": k.name, "passed": k.passed, "detail": k.detail} for k in c.checks]}
        for c in results]})
    return EXIT_OK if all(c.passed for c in results) else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ccbox", description="Resource theory of common-cause boxes.")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance for approximate boxes")
    p.add_argument("--ldo-cap", type=int, default=DEFAULT_LDO_CAP, help="max deterministic operations to enumerate")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for batch work")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compare", help="decide the ordering relation between boxes")
    c.add_argument("paths", nargs="+")
    c.add_argument("--matrix", action="store_true", help="all-pairs relation matrix")
    c.set_defaults(func=cmd_compare)

    m = sub.add_parser("monotone", help="evaluate a monotone")
    m.add_argument("path")
    m.add_argument("--which", choices=sorted(_WHICH), default="chsh")
    m.add_argument("--oracle", action="store_true", help="use the LP oracle instead of the closed form")
    m.set_defaults(func=cmd_monotone)

    k = sub.add_parser("catalog", help="write a named box as JSON")
    k.add_argument("name", choices=catalog.NAMES)
    k.add_argument("--k", type=int, default=0)
    k.add_argument("--alpha", default=None, help='rational such as "1/2"')
    k.add_argument("--theta", type=float, default=None)
    k.add_argument("-o", "--output")
    k.set_defaults(func=cmd_catalog)

    a = sub.add_parser("analyze", help="structural analyses")
    a.add_argument("what", choices=["sensitivity", "class", "family", "antichain"])
    a.add_argument("paths", nargs="*")
    a.add_argument("--anchor", default="l1bb", choices=["l1bb", "l2bb", "l3bb"])
    a.add_argument("--grid", type=int, default=9)
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("plotdata", help="CSV data for the monotone plots")
    d.add_argument("which", choices=["family", "tilted"])
    d.add_argument("--anchor", default="l1bb", choices=["l1bb", "l2bb", "l3bb"])
    d.add_argument("--grid", type=int, default=9)
    d.set_defaults(func=cmd_plotdata)

    v = sub.add_parser("verify", help="run an acceptance suite")
    v.add_argument("suite", choices=["group", "counts", "tables", "monotones", "appendixB", "preorder", "all"])
    v.add_argument("--quick", action="store_true", help="smaller random samples")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CliConfig(tol=args.tol, ldo_cap=args.ldo_cap, jobs=args.jobs)
    if args.command == "analyze" and args.what in ("sensitivity", "class", "antichain") and not args.paths:
        print("error: analyze needs box files", file=sys.stderr)
        return EXIT_FAIL
    try:
        return args.func(args, cfg)
    except (ApproxUnsound, AmbiguousBoundary) as e:
        print(f"undecided: {e}", file=sys.stderr)
        return EXIT_UNSOUND
    except (CCBoxError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
