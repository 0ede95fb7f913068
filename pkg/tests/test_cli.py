import csv
import json
import subprocess
import sys

import pytest

from pfci.benchmark import TIMING_COLUMNS
from pfci.cli import main, sha256

MARKS = {"tail", "arrow", "circle"}
META_KEYS = {"lambda", "alpha", "edges_ns", "edges_refined", "edges_final", "ms_stage1", "ms_stage2"}


def check_graph_schema(doc, extra=frozenset()):
    assert set(doc) == {"nodes", "edges"}
    assert all(isinstance(v, str) for v in doc["nodes"])
    assert len(set(doc["nodes"])) == len(doc["nodes"])
    for e in doc["edges"]:
        assert {"u", "v", "mark_at_u", "mark_at_v"} <= set(e) <= {"u", "v", "mark_at_u", "mark_at_v", *extra}
        assert e["u"] in doc["nodes"] and e["v"] in doc["nodes"] and e["u"] != e["v"]
        assert e["mark_at_u"] in MARKS and e["mark_at_v"] in MARKS


@pytest.fixture(scope="module")
def bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("sim")
    assert main(["simulate", "--p", "15", "--n", "80", "--pi", "0.15", "--seed", "4",
                 "--out-dir", str(out)]) == 0
    return out


def test_simulate_bundle(bundle):
    dag = json.loads((bundle / "dag.json").read_text())
    # DAG edges also carry their SEM weight
    check_graph_schema(dag, {"weight"})
    assert all(e["mark_at_u"] == "tail" and e["mark_at_v"] == "arrow" for e in dag["edges"])
    cfg = json.loads((bundle / "config.json").read_text())
    assert cfg["p"] == 15 and cfg["seed"] == 4 and "PCG64" in cfg["rng"]
    with open(bundle / "data.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == dag["nodes"] and len(rows) == 81


@pytest.mark.parametrize("method", ["pfci", "fci"])
def test_discover_outputs(bundle, tmp_path, method):
    out = tmp_path / method
    assert main(["discover", str(bundle / "data.csv"), "--method", method, "--dot",
                 "--out-dir", str(out)]) == 0
    check_graph_schema(json.loads((out / "pag.json").read_text()))
    meta = json.loads((out / "metadata.json").read_text())
    assert META_KEYS <= set(meta)
    assert meta["edges_final"] <= meta["edges_refined"] <= meta["edges_ns"]
    assert (out / "pag.dot").read_text().startswith("digraph")
    man = json.loads((out / "manifest.json").read_text())
    assert man["config"]["method"] == method
    assert man["inputs"][str(bundle / "data.csv")] == sha256(bundle / "data.csv")
    assert man["outputs"]["pag.json"] == sha256(out / "pag.json")
    assert {"tool", "version", "rng", "timings_ms", "argv"} <= set(man)


def test_discover_flags_recorded(bundle, tmp_path):
    out = tmp_path / "d"
    assert main(["discover", str(bundle / "data.csv"), "--lambda", "0.25", "--alpha", "0.05",
                 "--sym-rule", "and", "--rule-set", "full", "--max-cond-size", "2",
                 "--max-pds-size", "1", "--out-dir", str(out)]) == 0
    cfg = json.loads((out / "manifest.json").read_text())["config"]
    assert cfg["lambda"] == 0.25 and cfg["sym_rule"] == "and" and cfg["rule_set"] == "full"
    assert cfg["max_cond_size"] == 2 and cfg["max_pds_size"] == 1 and cfg["alpha"] == 0.05


def test_replay_reproduces_discover(bundle, tmp_path):
    first = tmp_path / "a"
    assert main(["discover", str(bundle / "data.csv"), "--out-dir", str(first)]) == 0
    again = tmp_path / "b"
    assert main(["replay", str(first / "manifest.json"), "--out-dir", str(again)]) == 0
    assert (first / "pag.json").read_bytes() == (again / "pag.json").read_bytes()


def test_discover_threads_identical(bundle, tmp_path, monkeypatch):
    digests = set()
    for threads in ("1", "4", "8"):
        monkeypatch.setenv("PFCI_THREADS", threads)
        out = tmp_path / threads
        assert main(["discover", str(bundle / "data.csv"), "--out-dir", str(out)]) == 0
        assert json.loads((out / "manifest.json").read_text())["config"]["threads"] == int(threads)
        digests.add(sha256(out / "pag.json"))
    assert len(digests) == 1


def test_unreadable_file_exit_code(tmp_path, capsys):
    missing = tmp_path / "nowhere.csv"
    assert main(["discover", str(missing), "--out-dir", str(tmp_path / "o")]) == 1
    assert str(missing) in capsys.readouterr().err


def test_bad_cell_names_row_and_column(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n4,oops,6\n")
    assert main(["discover", str(path), "--out-dir", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "row 3" in err and "b" in err


def test_benchmark_and_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bench.json"
    cfg.write_text(json.dumps({"study": "sim1", "p": [12], "replicates": 3, "pi": 0.15}))
    out = tmp_path / "bench"
    assert main(["benchmark", str(cfg), "--shd-ref", "dag-skeleton", "--out-dir", str(out)]) == 0
    with open(out / "replicates.csv") as fh:
        assert len(list(csv.DictReader(fh))) == 6
    with open(out / "benchmark.csv") as fh:
        agg = list(csv.DictReader(fh))
    assert [a["method"] for a in agg] == ["pfci", "fci"]
    man = json.loads((out / "manifest.json").read_text())
    assert man["config"]["shd_ref"] == "dag-skeleton"
    assert man["config"]["timing_columns"] == list(TIMING_COLUMNS)
    cfg.write_text(json.dumps({"study": "sim1", "replicates": 0}))
    assert main(["benchmark", str(cfg), "--out-dir", str(out)]) == 1
    assert "replicates" in capsys.readouterr().err


def test_blanket_command(tmp_path, capsys):
    g = {"nodes": ["A", "B", "C", "D"], "edges": [
        {"u": "C", "v": "A", "mark_at_u": "tail", "mark_at_v": "arrow"},
        {"u": "C", "v": "B", "mark_at_u": "circle", "mark_at_v": "circle"},
        {"u": "A", "v": "D", "mark_at_u": "circle", "mark_at_v": "arrow"}]}
    path = tmp_path / "g.json"
    path.write_text(json.dumps(g))
    assert main(["blanket", str(path), "--target", "C"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["layer1"] == ["A", "B"] and rep["layer2"] == ["D"]
    assert main(["blanket", str(path), "--target", "Z"]) == 1
    assert "Z" in capsys.readouterr().err


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "pfci.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("pfci")
    proc = subprocess.run([sys.executable, "-m", "pfci.cli", "discover", str(tmp_path / "x.csv"),
                           "--out-dir", str(tmp_path / "o")], capture_output=True, text=True)
    assert proc.returncode == 1 and "x.csv" in proc.stderr
