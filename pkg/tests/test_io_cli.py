import json
import math
from fractions import Fraction as F

import pytest

from ccbox.box import T2222, BoxType, make_box
from ccbox.catalog import NAMES, build, noisy_pr, table3_mixture
from ccbox.cli import main
from ccbox.errors import NegativeProbability
from ccbox.free_ops import enumerate_ldo, reynolds_op
from ccbox.io import (ParseError, box_from_json, box_to_json, detop_from_json, detop_to_json,
                      load_box, losr_from_json, losr_to_json, save_box)


@pytest.mark.parametrize("name", NAMES)
def test_catalog_round_trip(name):
    b = build(name, alpha=F(2, 7), theta=0.4)
    c = box_from_json(json.loads(json.dumps(box_to_json(b))))
    if b.exact:
        assert c == b
    else:
        assert (c.as_float() == b.as_float()).all() and c.tol == b.tol


def test_op_round_trip():
    op = enumerate_ldo(T2222, T2222)[1234]
    assert detop_from_json(json.loads(json.dumps(detop_to_json(op)))) == op
    r = reynolds_op()
    assert losr_from_json(losr_to_json(r)) == r


def test_parse_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"type": {"x": 2,\n "y": 2, ')
    with pytest.raises(ParseError, match="line 2"):
        load_box(p)
    p.write_text(json.dumps({"type": {"x": 2, "y": 2, "s": 1, "t": 1},
                             "entries": [[[["-1/2", "1/2"], ["1/2", "1/2"]]]]}))
    with pytest.raises(NegativeProbability):
        load_box(p)


def write(tmp_path, name, box):
    p = tmp_path / f"{name}.json"
    save_box(box, p)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_compare(tmp_path, capsys):
    m1, m2, m3 = (write(tmp_path, f"m{i}", table3_mixture(i)) for i in (1, 2, 3))
    code, out = run(capsys, "compare", m1, m2)
    assert code == 0 and json.loads(out)["relation"] == "strictly-above"
    assert json.loads(run(capsys, "compare", m2, m3)[1])["relation"] == "incomparable"
    assert json.loads(run(capsys, "compare", m1, m1)[1])["relation"] == "equivalent"


def test_compare_matrix_is_order_independent(tmp_path, capsys):
    paths = [write(tmp_path, f"m{i}", table3_mixture(i)) for i in (1, 2, 3)]
    a = json.loads(run(capsys, "compare", "--matrix", *paths)[1])
    b = json.loads(run(capsys, "--jobs", "2", "compare", "--matrix", *reversed(paths))[1])
    assert a == b


def test_monotone(tmp_path, capsys):
    p = write(tmp_path, "c", noisy_pr(F(1, 2)))
    doc = json.loads(run(capsys, "monotone", "--which", "npr", p)[1])
    assert doc["value"] == "3" and doc["method"] == "closed" and doc["decomposition"]["alpha"] == "1/2"
    doc = json.loads(run(capsys, "monotone", "--which", "chsh", "--oracle", p)[1])
    assert doc == {"value": "3", "method": "oracle"}
    assert json.loads(run(capsys, "monotone", "--which", "rbl", p)[1])["value"] == "1/5"


def test_catalog_command(tmp_path, capsys):
    out = tmp_path / "pr.json"
    assert main(["catalog", "pr", "--k", "3", "-o", str(out)]) == 0
    assert load_box(out) == build("pr", k=3)
    code, text = run(capsys, "catalog", "noisy-pr")
    assert code == 1


def test_plotdata(capsys):
    _, out = run(capsys, "plotdata", "family", "--grid", "9")
    assert "1/2,1/2,5/2,3" in out.splitlines()
    _, out = run(capsys, "plotdata", "tilted", "--grid", "8")
    last = out.strip().splitlines()[-1].split(",")
    assert abs(float(last[1]) - 2 * math.sqrt(2)) < 1e-9 and abs(float(last[2]) - 2 * math.sqrt(2)) < 1e-9
    first = out.strip().splitlines()[1].split(",")
    assert float(first[1]) < 2.1


def test_analyze(tmp_path, capsys):
    pr = write(tmp_path, "pr", build("pr"))
    assert json.loads(run(capsys, "analyze", "sensitivity", pr)[1])["sensitive"] is True
    assert json.loads(run(capsys, "analyze", "class", pr)[1])["size"] == 8
    free = write(tmp_path, "free", build("l-empty"))
    assert json.loads(run(capsys, "analyze", "class", free)[1])["class"] == "free"
    doc = json.loads(run(capsys, "analyze", "family", "--anchor", "l2bb", "--grid", "3")[1])
    assert len(doc["rows"]) == 9


def test_verify_exit_codes(capsys):
    assert main(["verify", "group"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_error_exit_codes(tmp_path, capsys):
    assert main(["monotone", str(tmp_path / "missing.json")]) == 1
    p = write(tmp_path, "m", table3_mixture(1))
    assert main(["monotone", "--which", "nf", "--oracle", p]) == 1
    assert main(["compare", p]) == 1
    assert main(["analyze", "sensitivity"]) == 1
