import json

import pytest

from builders import cycle
from lcl_lab import sim
from lcl_lab.cli import main
from lcl_lab.graph import read_edgelist, write_edgelist


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def c4(tmp_path):
    p = tmp_path / "c4.txt"
    p.write_text(write_edgelist(cycle(4)))
    return p


def test_gen_random_regular(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert run(capsys, "gen", "--random-regular", "-n", 100, "-d", 5, "--seed", 7, "-o", out)[0] == 0
    g = read_edgelist(out.read_text())
    assert g.n == 100 and g.regular_degree() == 5


def test_gen_tree(capsys):
    code, out, _ = run(capsys, "gen", "--tree", "-d", 3, "--depth", 2)
    assert code == 0 and read_edgelist(out).n == 10


def test_gen_rejects_impossible_graph(capsys):
    code, _, err = run(capsys, "gen", "-n", 3, "-d", 3)
    assert code == 2 and "even" in err


def test_gen_requires_seed(capsys):
    assert run(capsys, "gen", "-n", 10, "-d", 3)[0] == 2


def test_gen_dot_and_labels(tmp_path, capsys):
    out, dot = tmp_path / "t.txt", tmp_path / "t.dot"
    assert run(capsys, "gen", "--two-colored", "-d", 3, "--depth", 2, "-o", out, "--dot", dot)[0] == 0
    labels = json.loads((tmp_path / "t.txt.labels.json").read_text())
    assert labels[0] == "V" and dot.read_text().startswith("graph")


def test_run_two_sweep(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "gen", "-n", 200, "-d", 5, "--seed", 1, "-o", g)
    code, out, _ = run(capsys, "run", "two-sweep", "--mode", "three-color", "-k", 3, "--graph", g)
    doc = json.loads(out)
    assert code == 0 and doc["verified"] and len(doc["coloring"]) == 200
    assert doc["rounds_used"] == sum(doc["rounds"].values())
    assert sum(doc["tags"].values()) == 200


def test_run_two_sweep_below_threshold(tmp_path, capsys):
    assert run(capsys, "run", "two-sweep", "-k", 3, "-n", 50, "-d", 4, "--seed", 1)[0] == 2


def test_run_layered_mis_on_seven_cycle(tmp_path, capsys):
    p = tmp_path / "c7.txt"
    p.write_text(write_edgelist(cycle(7)))
    code, out, _ = run(capsys, "run", "layered-mis", "-c", 3, "--graph", p)
    assert code == 0 and json.loads(out)["palette_size"] == 3


@pytest.mark.parametrize("alg", ["linial", "proper"])
def test_run_proper_colorings(capsys, alg):
    code, out, _ = run(capsys, "run", alg, "-n", 60, "-d", 3, "--seed", 4)
    assert code == 0 and json.loads(out)["verified"]


def test_verify_partial_and_cut(c4, tmp_path, capsys):
    alt, ones = tmp_path / "alt.json", tmp_path / "ones.json"
    alt.write_text("[1, 2, 1, 2]")
    ones.write_text("[1, 1, 1, 1]")
    code, out, _ = run(capsys, "verify", "partial", "-k", 2, "--graph", c4, "--coloring", alt)
    assert code == 0 and out == ""
    code, out, _ = run(capsys, "verify", "cut", "--graph", c4, "--coloring", ones)
    lines = out.splitlines()
    assert code == 1 and len(lines) == 4
    assert all(json.loads(x)["kind"] == "CUT_IMPROVABLE" for x in lines)


def test_verify_accepts_run_output(tmp_path, capsys):
    g, res = tmp_path / "g.txt", tmp_path / "r.json"
    run(capsys, "gen", "-n", 100, "-d", 6, "--seed", 3, "-o", g)
    assert run(capsys, "run", "two-sweep", "--mode", "full-palette", "-k", 4, "--graph", g, "-o", res)[0] == 0
    assert run(capsys, "verify", "partial", "-k", 4, "--graph", g, "--coloring", res)[0] == 0
    assert run(capsys, "verify", "proper", "--graph", g, "--coloring", res)[0] == 1


def test_reduce_memoized_then_verify_sinkless(tmp_path, capsys):
    o, h = tmp_path / "o.json", tmp_path / "h.txt"
    code, out, _ = run(
        capsys, "reduce", "--d", 3, "--k", 2, "--oracle", "memoized",
        "--orientation-out", o, "--host-out", h, "--vg-out", tmp_path / "vg.txt",
    )
    doc = json.loads(out)
    assert code == 0 and doc["sinkless"] and doc["merged_count"] == doc["host_edges"] == 24
    assert run(capsys, "verify", "sinkless", "--graph", h, "--orientation", o)[0] == 0
    side = json.loads((tmp_path / "vg.txt.json").read_text())
    assert len(side["merged"]) == 24


def test_reduce_constant_oracle_exit_code(capsys):
    code, out, _ = run(capsys, "reduce", "--oracle", "constant-white")
    assert code == 3 and json.loads(out)["disqualified"]


def test_bench_single_node_and_plateau(capsys):
    code, out, _ = run(capsys, "bench", "two-sweep", "--sizes", 1, 256, 1024, "--seeds", 1)
    rows = json.loads(out)["rows"]
    assert code == 0 and rows[0]["rounds_used"] == 0
    assert abs(rows[2]["rounds_used"] - rows[1]["rounds_used"]) <= 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 40, "d": 3, "seed": 2}))
    code, out, _ = run(capsys, "--config", cfg, "gen")
    assert code == 0 and read_edgelist(out).n == 40
    code, out, _ = run(capsys, "--config", cfg, "gen", "-n", 30)
    assert read_edgelist(out).n == 30


def test_threads_flag_sets_worker_cap(capsys, monkeypatch):
    monkeypatch.setattr(sim, "DEFAULT_WORKERS", 1)
    run(capsys, "--threads", 3, "gen", "--tree", "-d", 3, "--depth", 1)
    assert sim.DEFAULT_WORKERS == 3


def test_outputs_are_deterministic(capsys):
    args = ("run", "two-sweep", "-k", 3, "-n", 100, "-d", 5, "--seed", 9, "--decisions")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]
