"""JSON and CSV serialisation of boxes and operations.

Exact numbers are written as ``"p/q"`` strings and approximate ones as
17-significant-digit decimals, so both round-trip without loss.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .box import Box, BoxType, make_box
from .errors import CCBoxError
from .free_ops import DetOp, LosrOp, WingDetOp
from .scalar import DEFAULT_TOL, as_fraction, fmt


class ParseError(CCBoxError, ValueError):
    pass


def box_to_json(box: Box) -> dict:
    bt = box.box_type
    table = box.table if box.exact else box.as_float()
    entries = [[[[fmt(table[s, t, x, y]) for y in range(bt.y)] for x in range(bt.x)]
                for t in range(bt.t)] for s in range(bt.s)]
    out = {"type": {"x": bt.x, "y": bt.y, "s": bt.s, "t": bt.t},
           "entries": entries, "encoding": "rational" if box.exact else "float"}
    if not box.exact:
        out["tol"] = box.tol
    return out


def box_from_json(doc: dict) -> Box:
    try:
        ty = doc["type"]
        bt = BoxType(int(ty["x"]), int(ty["y"]), int(ty["s"]), int(ty["t"]))
        encoding = doc.get("encoding", "rational")
        entries = doc["entries"]
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed box document: missing {e}") from None
    if encoding == "rational":
        conv, tol = as_fraction, None
    elif encoding == "float":
        conv, tol = float, float(doc.get("tol", DEFAULT_TOL))
    else:
        raise ParseError(f"unknown encoding {encoding!r}")
    try:
        table = [[[[conv(v) for v in row] for row in blk] for blk in srow] for srow in entries]
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad entry: {e}") from None
    return make_box(bt, table, tol=tol)


def load_box(path) -> Box:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    try:
        return box_from_json(doc)
    except CCBoxError as e:
        raise type(e)(f"{path}: {e}") from None


def save_box(box: Box, path) -> None:
    Path(path).write_text(json.dumps(box_to_json(box), indent=1) + "\n")


def detop_to_json(op: DetOp) -> dict:
    def ty(bt):
        return {"x": bt.x, "y": bt.y, "s": bt.s, "t": bt.t}

    def wing(w):
        return {"f": list(w.f), "g": [list(r) for r in w.g]}

    return {"src": ty(op.src), "dst": ty(op.dst), "a": wing(op.wing_a), "b": wing(op.wing_b)}


def detop_from_json(doc: dict) -> DetOp:
    def ty(d):
        return BoxType(d["x"], d["y"], d["s"], d["t"])

    def wing(d):
        return WingDetOp(tuple(d["f"]), tuple(tuple(r) for r in d["g"]))

    return DetOp(ty(doc["src"]), ty(doc["dst"]), wing(doc["a"]), wing(doc["b"]))


def losr_to_json(op: LosrOp) -> dict:
    return {"terms": [{"weight": fmt(w), "op": detop_to_json(o)} for w, o in op.terms]}


def losr_from_json(doc: dict) -> LosrOp:
    return LosrOp.of([as_fraction(t["weight"]) for t in doc["terms"]],
                     [detop_from_json(t["op"]) for t in doc["terms"]])


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, (Fraction, float, int, np.floating)) or hasattr(v, "tol") else v
                    for v in r])
    return buf.getvalue()
