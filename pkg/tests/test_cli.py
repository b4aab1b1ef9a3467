import csv
import json
import subprocess
import sys

import pytest

from kpathgnn.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, run
from kpathgnn.dataset import read_dataset

SUBCOMMANDS = ("gen", "count", "tuples", "augment", "metrics", "scenario", "diff", "bench")


@pytest.fixture(scope="module")
def data(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    path = d / "d.jsonl"
    argv = ["gen", "--kinds", "cycle3,cycle4,path4", "--num", "10", "--nodes", "15:23", "--avg-edges", "31.34",
            "--seed", "1", "--split", "3:2:5", "--out", str(path), "--stats", str(d / "s.json")]
    assert run(argv) == EXIT_OK
    return path


def test_gen_contract(data):
    lines = data.read_text().splitlines()
    assert len(lines) == 10
    first = json.loads(lines[0])
    assert set(first) == {"id", "num_nodes", "edges", "features", "y", "split"}
    assert set(first["y"]) == {"cycle3", "cycle4", "path4"}
    stats = json.loads((data.parent / "s.json").read_text())
    assert stats["graphs"] == 10
    assert stats["splits"] == {"test": 5, "train": 3, "valid": 2}


def test_count_oracle_equals_mp(data, tmp_path):
    a, b = tmp_path / "mp.csv", tmp_path / "or.csv"
    assert run(["count", "--in", str(data), "--kind", "cycle4", "--method", "mp-corrected", "--k", "1",
                "--out", str(a)]) == EXIT_OK
    assert run(["count", "--in", str(data), "--kind", "cycle4", "--method", "oracle", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(b.open()))
    recs = read_dataset(data)
    assert [int(r["count"]) for r in rows] == [rec.y["cycle4"] for rec in recs]


def test_count_k_mismatch_is_usage_error(data, tmp_path):
    out = tmp_path / "c.csv"
    assert run(["count", "--in", str(data), "--kind", "cycle4", "--method", "mp-corrected", "--k", "2",
                "--out", str(out)]) == EXIT_USAGE
    assert run(["count", "--in", str(data), "--kind", "clique4", "--method", "mp-literal",
                "--out", str(out)]) == EXIT_USAGE


def test_diff(data, tmp_path):
    out = tmp_path / "r.csv"
    assert run(["diff", "--in", str(data), "--k", "1,2", "--out", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["graph_id", "root", "k", "oracle", "mp_corrected", "mp_literal",
                             "match_corrected", "match_literal"]
    nodes = sum(r.graph.num_nodes for r in read_dataset(data))
    assert len(rows) == 2 * nodes
    assert all(r["match_corrected"] == "1" for r in rows)


def test_tuples(data, tmp_path):
    out = tmp_path / "t.jsonl"
    assert run(["tuples", "--in", str(data), "--k", "2", "--L", "1", "--out", str(out)]) == EXIT_OK
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    recs = read_dataset(data)
    # k=2 simple paths: one per incident edge end
    assert len(lines) == sum(2 * r.graph.num_edges for r in recs)
    first = lines[0]
    assert len(first["tuple"]) == 2
    assert len(first["features"][0]) == 2


def test_augment(data, tmp_path):
    out = tmp_path / "a.jsonl"
    assert run(["augment", "--in", str(data), "--mu", "0.4", "--seed", "3", "--out", str(out)]) == EXIT_OK
    views = read_dataset(out)
    recs = read_dataset(data)
    assert len(views) == 20
    for i, r in enumerate(recs):
        for v in views[2 * i:2 * i + 2]:
            assert set(v.graph.edges) <= set(r.graph.edges)
            assert v.id.startswith(r.id + "#v")


def test_metrics_classification(tmp_path):
    ds = tmp_path / "m.jsonl"
    rows = [{"id": f"g{i}", "num_nodes": 2, "edges": [[0, 1]], "features": None, "y": {"label": y},
             "split": "test"} for i, y in enumerate([1, 0, 0])]
    ds.write_text("".join(json.dumps(r) + "\n" for r in rows))
    pred = tmp_path / "p.csv"
    pred.write_text("id,pred\ng0,1\ng1,0\ng2,1\n")
    out = tmp_path / "m.json"
    assert run(["metrics", "--pred", str(pred), "--in", str(ds), "--task", "classification",
                "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["acc"] == pytest.approx(2 / 3)
    assert doc["micro_f1"] == pytest.approx(2 / 3)


def test_metrics_regression(data, tmp_path):
    recs = read_dataset(data)
    pred = tmp_path / "p.csv"
    pred.write_text("".join(f"{r.id},{r.y['cycle3']}\n" for r in recs))
    out = tmp_path / "m.json"
    assert run(["metrics", "--pred", str(pred), "--in", str(data), "--task", "regression", "--target", "cycle3",
                "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["mae"] == 0.0 and doc["r2"] == 1.0


def test_metrics_missing_prediction(data, tmp_path):
    pred = tmp_path / "p.csv"
    pred.write_text("ge-0,1\n")
    assert run(["metrics", "--pred", str(pred), "--in", str(data), "--task", "regression", "--target", "cycle3",
                "--out", str(tmp_path / "m.json")]) == EXIT_DATA


def test_scenarios(data, tmp_path):
    out = tmp_path / "n.jsonl"
    assert run(["scenario", "noise", "--alpha", "0.5", "--seed", "2", "--in", str(data), "--out", str(out)]) == EXIT_OK
    for before, after in zip(read_dataset(data), read_dataset(out)):
        assert after.graph.num_edges == before.graph.num_edges - round(before.graph.num_edges * 0.5 + 1e-9)
    rep = tmp_path / "r.json"
    assert run(["scenario", "fewshot", "--gamma", "1", "--target", "cycle3", "--seed", "2", "--in", str(data),
                "--out", str(out), "--report", str(rep)]) == EXIT_OK
    assert len(json.loads(rep.read_text())["groups"]) == 5
    assert run(["scenario", "imbalance", "--seed", "2", "--in", str(data), "--out", str(out)]) == EXIT_USAGE


def test_bench(tmp_path):
    out = tmp_path / "b.json"
    assert run(["bench", "--num", "5", "--seed", "0", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["graphs"] == 5


def test_usage_errors(tmp_path, capsys):
    assert run([]) == EXIT_USAGE
    assert run(["gen", "--num", "3", "--out", str(tmp_path / "x")]) == EXIT_USAGE  # no --seed
    assert run(["gen", "--seed", "1", "--bogus", "--out", str(tmp_path / "x")]) == EXIT_USAGE
    assert run(["gen", "--seed", "1", "--nodes", "9:4", "--out", str(tmp_path / "x")]) == EXIT_USAGE
    assert run(["count", "--in", "x", "--kind", "cycle9", "--out", "y"]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_data_errors(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    ok = {"id": "a", "num_nodes": 2, "edges": [[0, 1]], "features": None, "y": {}, "split": None}
    bad.write_text(json.dumps(ok) + "\n" + json.dumps(dict(ok, edges=[[1, 1]])) + "\n")
    assert run(["count", "--in", str(bad), "--kind", "cycle3", "--out", str(tmp_path / "c.csv")]) == EXIT_DATA
    assert "line 2" in capsys.readouterr().err
    assert run(["count", "--in", str(tmp_path / "missing.jsonl"), "--kind", "cycle3",
                "--out", str(tmp_path / "c.csv")]) == EXIT_DATA


def test_threads_do_not_change_output(data, tmp_path):
    for cmd in (["augment", "--mu", "0.4", "--seed", "5"], ["diff", "--k", "1,2"], ["tuples", "--k", "2"]):
        outs = []
        for threads in ("1", "3"):
            out = tmp_path / f"{cmd[0]}{threads}"
            assert run([*cmd, "--in", str(data), "--out", str(out), "--threads", threads]) == EXIT_OK
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


@pytest.mark.parametrize("sub", SUBCOMMANDS)
def test_help_lists_flags(sub):
    res = subprocess.run([sys.executable, "-m", "kpathgnn", sub, "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "usage: kpath " + sub in res.stdout
    assert "--" in res.stdout
