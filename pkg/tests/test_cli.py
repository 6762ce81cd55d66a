import json

import pytest

from hyperzero.cli import main
from hyperzero.formats import parse_hypergraph
from hyperzero.balance import is_strictly_balanced


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_construct_text_round_trip(capsys, tmp_path):
    code, out, err = run(capsys, "construct", "--arity", "3", "--rho", "3/5", "--format", "text")
    assert code == 0 and err.startswith("resolved: ")
    G = parse_hypergraph(out)
    assert is_strictly_balanced(G).strictly_balanced
    path = tmp_path / "g.hg"
    path.write_text(out)
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and json.loads(out)["strictly_balanced"] is True
    code, out, _ = run(capsys, "maxdensity", "--in", str(path))
    assert code == 0 and json.loads(out)["rho_max"] == "3/5"


def test_construct_json_and_out(capsys, tmp_path):
    target = tmp_path / "o.json"
    code, out, _ = run(capsys, "construct", "--arity", "3", "--rho", "1/2", "--out", str(target))
    assert code == 0 and out == ""
    d = json.loads(target.read_text())
    assert d["arity"] == 3 and 2 * len(d["edges"]) == d["vertices"]


def test_construct_infeasible(capsys):
    code, _, err = run(capsys, "construct", "--arity", "3", "--rho", "3/10")
    assert code == 1 and "construct:" in err


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "construct", "--arity", "3", "--rho", "3/5", "--bogus")[0] == 2
    assert run(capsys, "construct", "--arity", "3", "--rho", "0.6")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.hg"))[0] == 2
    assert run(capsys, "sample", "--arity", "3", "--n", "10", "--p", "0.1", "--jobs", "0")[0] == 2


def test_format_error_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.hg"
    bad.write_text("3 4 2\n0 1 9\n0 1 2\n")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 2 and "line 2" in err


def test_verify_not_balanced(capsys, tmp_path):
    path = tmp_path / "g.hg"
    path.write_text("2 4 4\n0 1\n1 2\n0 2\n2 3\n")
    assert run(capsys, "verify", str(path))[0] == 1


def test_classify_and_closure(capsys, tmp_path):
    path = tmp_path / "r.hg"
    path.write_text("3 3 1\n0 1 2\nroots: 0\n")
    code, out, _ = run(capsys, "classify", str(path), "--alpha", "17/12")
    d = json.loads(out)
    assert code == 0 and d["type"] == [2, 1] and d["polarity"] == "sparse" and d["safe"]
    plain = tmp_path / "g.hg"
    plain.write_text("3 3 1\n0 1 2\n")
    code, out, _ = run(capsys, "closure", str(plain), "--alpha", "17/12", "--t", "1", "--x", "0,1")
    assert code == 0 and json.loads(out)["closure"] == [0, 1, 2]
    assert run(capsys, "closure", str(plain), "--alpha", "17/12", "--t", "1", "--x", "7")[0] == 2


def test_genericity_error(capsys, tmp_path):
    path = tmp_path / "r.hg"
    path.write_text("3 3 1\n0 1 2\nroots: 0\n")
    code, _, err = run(capsys, "classify", str(path), "--alpha", "2/1")
    assert code == 2 and "genericity" in err


def test_sample_deterministic(capsys):
    a = run(capsys, "sample", "--arity", "3", "--n", "30", "--alpha", "2/1", "--seed", "5")
    b = run(capsys, "sample", "--arity", "3", "--n", "30", "--alpha", "2/1", "--seed", "5")
    assert a[0] == 0 and a[1] == b[1]


def test_experiment(capsys, tmp_path):
    cfg = tmp_path / "t.cfg"
    cfg.write_text("arity=3\nn=40\np=0.001\npattern_edges=0 1 2\nreplicates=20\nseed=3\ntolerance=0.05\n")
    code, out, _ = run(capsys, "experiment", "poisson", "--config", str(cfg))
    d = json.loads(out)
    assert code in (0, 1) and d["kind"] == "poisson" and d["seed"] == 3
    code2, out2, _ = run(capsys, "experiment", "poisson", "--config", str(cfg), "--seed", "4")
    assert json.loads(out2)["seed"] == 4


def test_play_and_tournament(capsys):
    code, out, _ = run(capsys, "play", "--n", "20", "--m", "25", "--alpha", "29/12", "--rounds", "2")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and lines[-1]["verdict"] in ("duplicator_won", "spoiler_won")
    assert [x["round"] for x in lines[:-1]] == [1, 2][: len(lines) - 1]
    code, out, _ = run(capsys, "tournament", "--n", "20", "--m", "25", "--alpha", "29/12",
                       "--rounds", "2", "--games", "3")
    d = json.loads(out)
    assert code == 0 and d["games"] == 3
    assert run(capsys, "tournament", "--n", "5", "--m", "5", "--alpha", "2/1", "--rounds", "1",
               "--games", "1", "--spoiler", "human")[0] == 2


def test_version(capsys):
    assert main(["--version"]) == 0
