import subprocess
import sys

import pytest

from optsync.cli import main
from optsync.construct import build, make_tree, TreeSpec
from optsync.digraph import format_edge_list, parse_graph, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def graph_file(tmp_path):
    def write(g, name="g.txt", fmt="edges"):
        p = tmp_path / name
        p.write_text(format_edge_list(g) if fmt == "edges" else to_json(g))
        return str(p)

    return write


def test_construct_edges(capsys):
    assert run(capsys, "construct", "-n", "2", "-m", "1", "--tree", "star", "--format", "edges")[:2] == (0, "2 1\n1 2\n")


def test_construct_dot_complete(capsys):
    code, out, _ = run(capsys, "construct", "-n", "4", "-m", "12", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    # 12 arcs drawn as 6 bidirectional edges
    assert out.count("dir=both") == 6


def test_construct_rejects_small_m(capsys):
    assert run(capsys, "construct", "-n", "5", "-m", "3")[0] == 2


def test_construct_bad_flags(capsys):
    assert run(capsys, "construct", "-n", "x")[0] == 2
    assert run(capsys, "construct", "-n", "4", "-m", "5", "--tree", "nope")[0] == 2
    assert run(capsys, "construct")[0] == 2


def test_construct_trace_and_replay(capsys, tmp_path):
    trace = tmp_path / "t.txt"
    code, out, _ = run(capsys, "construct", "-n", "5", "-m", "9", "--tree", "path", "--trace", str(trace))
    assert code == 0
    assert trace.read_text().splitlines()[:2] == ["5 9", "1:2 2:3 3:4 4:5"]
    code, replayed, _ = run(capsys, "construct", "--replay", str(trace))
    assert code == 0 and replayed == out
    trace.write_text(trace.read_text().replace("9 2 ", "9 3 "))
    assert run(capsys, "construct", "--replay", str(trace))[0] == 2


def test_spectrum_exact(capsys, graph_file):
    path = graph_file(build(5, 8)[0])
    assert run(capsys, "spectrum", path, "--mode", "exact") == (0, "0 16 -32 24 -8 1\n", "")


def test_spectrum_spread(capsys, graph_file):
    tree = graph_file(make_tree(TreeSpec("random", 5, seed=2)), "t.txt")
    assert run(capsys, "spectrum", tree, "--mode", "spread")[1] == "0, 0, 1, true\n"
    cyc = graph_file(parse_graph("3 3\n1 2\n2 3\n3 1\n"), "c.txt", fmt="json")
    assert run(capsys, "spectrum", cyc, "--mode", "spread")[1] == "0.75, 0.25, 1, false\n"


def test_spectrum_numeric_csv(capsys, graph_file):
    path = graph_file(make_tree(TreeSpec("star", 3)))
    code, out, _ = run(capsys, "spectrum", path)
    assert code == 0 and out == "0,0\n1,0\n1,0\n"


@pytest.mark.parametrize("content", ["", "nonsense", "3 1\n1 1\n", '{"n": 2, "arcs": [[1, 3]]}', "2 1\n1 2 0\n"])
def test_malformed_inputs_exit_2(capsys, tmp_path, content):
    p = tmp_path / "bad.txt"
    p.write_text(content)
    assert run(capsys, "spectrum", str(p), "--mode", "spread")[0] == 2
    assert run(capsys, "consensus", str(p))[0] == 2


def test_missing_file_exit_2(capsys):
    assert run(capsys, "spectrum", "/nonexistent/graph.txt")[0] == 2


def test_verify_conjecture(capsys):
    code, out, _ = run(capsys, "verify", "conjecture", "-n", "3", "-m", "3")
    assert code == 0
    assert out.splitlines() == [
        "n,m,graphs_checked,min_sigma_sq,sigma_min_sq,minimizer_count,all_minimizers_optimal",
        "3,3,20,0.25,0.25,12,true",
    ]
    assert run(capsys, "verify", "conjecture", "-n", "7", "-m", "10")[0] == 2
    assert run(capsys, "verify", "conjecture", "-n", "6", "-m", "12", "--long-run")[0] == 2


def test_verify_conjecture_all_m_and_jobs(capsys):
    code, out1, _ = run(capsys, "verify", "conjecture", "-n", "3")
    assert code == 0 and len(out1.splitlines()) == 8
    code, out2, _ = run(capsys, "verify", "conjecture", "-n", "3", "--jobs", "2")
    assert out1 == out2


def test_verify_conjecture_violation_exit_1(capsys, monkeypatch):
    import optsync.verify as v

    real = v.verify_conjecture

    def broken(*a, **k):
        r = real(*a, **k)
        from dataclasses import replace

        return replace(r, all_minimizers_optimal=False)

    monkeypatch.setattr(v, "verify_conjecture", broken)
    assert run(capsys, "verify", "conjecture", "-n", "3", "-m", "3")[0] == 1


def test_verify_theorem3(capsys):
    code, out, _ = run(capsys, "verify", "theorem3", "--n-max", "6", "--seeds", "3", "--rng", "42")
    assert code == 0 and out.splitlines()[1].endswith(",0")
    code2, out2, _ = run(capsys, "verify", "theorem3", "--n-max", "6", "--seeds", "3", "--rng", "42", "--jobs", "2")
    assert out2 == out
    assert run(capsys, "verify", "theorem3", "--n-max", "30")[0] == 2


def test_verify_theorem2(capsys):
    code, out, _ = run(capsys, "verify", "theorem2", "--trials", "500", "--rng", "9")
    assert code == 0 and out.splitlines()[0] == "check,cases_run,failures"


def test_trees(capsys):
    assert run(capsys, "trees", "-n", "5")[1] == "24\n"
    code, out, _ = run(capsys, "trees", "-n", "3", "--list", "--format", "parents")
    assert out == "0 1 1\n1 1 2\n"
    assert run(capsys, "trees", "-n", "12", "--list")[0] == 2


def test_consensus_cli(capsys, graph_file, tmp_path):
    star = graph_file(make_tree(TreeSpec("star", 3)))
    code, out, err = run(capsys, "consensus", star, "--dt", "0.01", "--steps", "2000")
    assert code == 0
    last = out.splitlines()[-1].split(",")
    assert float(last[-1]) < 1e-6
    assert "algebraic_connectivity=1" in err

    pair = graph_file(parse_graph("2 0\n"), "pair.txt")
    code, out, _ = run(capsys, "consensus", pair, "--steps", "50")
    assert float(out.splitlines()[-1].split(",")[-1]) == 1

    x0 = tmp_path / "x0.txt"
    x0.write_text("0.5 0.5 0.5\n")
    csv = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "consensus", star, "--x0", str(x0), "--steps", "20", "--out", str(csv))
    assert code == 0 and "final_disagreement=0" in out
    assert all(row.split(",")[-1] == "0" for row in csv.read_text().splitlines()[1:])

    assert run(capsys, "consensus", star, "--dt", "0.5")[0] == 2
    x0.write_text("1 2\n")
    assert run(capsys, "consensus", star, "--x0", str(x0))[0] == 2


def test_pipe_round_trip():
    for n, m, tree in [(5, 7, "star"), (6, 17, "path"), (7, 30, "random:99")]:
        g = subprocess.run(
            [sys.executable, "-m", "optsync", "construct", "-n", str(n), "-m", str(m), "--tree", tree, "--format", "json"],
            capture_output=True, text=True, check=True,
        ).stdout
        s = subprocess.run(
            [sys.executable, "-m", "optsync", "spectrum", "-", "--mode", "spread"],
            input=g, capture_output=True, text=True, check=True,
        ).stdout
        assert s.strip().endswith("true")


def test_deterministic_outputs(capsys):
    a = run(capsys, "construct", "-n", "9", "-m", "40", "--tree", "random:1234", "--format", "json")
    b = run(capsys, "construct", "-n", "9", "-m", "40", "--tree", "random:1234", "--format", "json")
    assert a == b


def test_help(capsys):
    for cmd in (["construct"], ["spectrum"], ["verify", "conjecture"], ["trees"], ["consensus"]):
        assert main(cmd + ["--help"]) == 0
    capsys.readouterr()
