import json
import random
import subprocess
import sys

import pytest

from drinfeld_measures.cli import parse_edge, parse_matrix, parse_vertex, run
from drinfeld_measures.field import GF
from drinfeld_measures.poly import PolyT
from drinfeld_measures.series import LaurentSeries
from drinfeld_measures.tree import random_edge, random_vertex


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moment_example(capsys):
    code, out, _ = call(capsys, "measure", "moment", "--q", "3", "--edge", "e0", "--j", "1", "--prec", "12")
    data = json.loads(out)
    assert code == 0
    assert data["r"] == "1" and data["base"] == "Upsilon0"


def test_reduce_example(capsys):
    code, out, _ = call(capsys, "tree", "reduce", "--edge", "L(-1)->L(0)")
    assert code == 0
    assert json.loads(out) == {"n": 0, "gamma": [[0, 1], [1, 0]], "flip": True}


def test_verify_lvalues(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "lvalues", "--q", "2")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert all(c["status"] == "pass" for r in data["reports"] for c in r["checks"])


def test_usage_errors_exit_2(capsys):
    assert call(capsys, "tree", "reduce", "--edge", "nonsense")[0] == 2
    assert call(capsys, "--q", "6", "expand", "upsilon")[0] == 2
    assert call(capsys, "tree", "reduce")[0] == 2
    code, _, err = call(capsys, "nosuch")
    assert code == 2


def test_computation_error_exit_1(capsys):
    code, _, err = call(capsys, "measure", "moment", "--edge", "e0", "--j", "9")
    assert code == 1
    assert json.loads(err)["error"]["type"] == "UnsupportedEdgeExponent"


def test_flags_before_and_after_subcommand(capsys):
    a = call(capsys, "--q", "3", "expand", "upsilon", "--prec", "6")[1]
    b = call(capsys, "expand", "upsilon", "--q", "3", "--prec", "6")[1]
    assert a == b and "pi^-9" in a


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nq = 3\nprec = 6\n")
    data = json.loads(call(capsys, "--config", str(cfg), "expand", "upsilon")[1])
    assert data["value"]["prec"] == 6
    data = json.loads(call(capsys, "--config", str(cfg), "--prec", "9", "expand", "upsilon")[1])
    assert data["value"]["prec"] == 9
    cfg.write_text("colour = blue\n")
    assert call(capsys, "--config", str(cfg), "expand", "upsilon")[0] == 2


def test_text_format(capsys):
    code, out, _ = call(capsys, "--format", "text", "tree", "reduce", "--edge", "e2")
    assert code == 0
    assert "gamma: [[1, 0], [0, 1]]" in out and "flip: false" in out


def test_output_is_byte_identical():
    cmd = [sys.executable, "-m", "drinfeld_measures", "zeta", "--q", "3", "--j", "4"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["agree"]


@pytest.mark.parametrize("q", [2, 3, 4])
def test_text_grammar_roundtrip(q):
    F = GF(q)
    rng = random.Random(q)
    for _ in range(50):
        v = random_vertex(F, rng)
        assert parse_vertex(F, repr(v)) == v
        e = random_edge(F, rng)
        assert parse_edge(F, repr(e)) == e


def test_json_roundtrip():
    F = GF(4)
    rng = random.Random(0)
    for _ in range(50):
        s = LaurentSeries(F, rng.randrange(-5, 5), [rng.randrange(4) for _ in range(8)],
                          rng.choice([None, 12]))
        assert LaurentSeries.from_json(F, json.loads(json.dumps(s.to_json()))) == s
        p = PolyT(F, [rng.randrange(4) for _ in range(6)])
        assert PolyT.from_json(F, json.loads(json.dumps(p.to_json()))) == p


def test_matrix_grammar():
    F = GF(3)
    g = parse_matrix(F, "1, T; 0, 2")
    assert g.b == PolyT.T(F) and g.d == PolyT.const(F, 2)
