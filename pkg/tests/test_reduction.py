import itertools
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lcl_lab.graph import Ball, Graph, ball, gen_2colored_regular_tree
from lcl_lab.reduction import (
    BLACK,
    HOST_COLOR,
    WHITE,
    Disqualified,
    Gadget,
    MemoizedOracle,
    ReductionError,
    build_gadget_pair,
    build_virtual_graph,
    constant_oracle,
    extract_orientation,
    gadget_source,
    host_degree,
    precolored_matches_gadgets,
    run_reduction,
    solve_partial_two_coloring,
    verify_gadget_property,
)
from lcl_lab.sim import ViewFunction
from lcl_lab.verify import (
    Policy,
    verify_distance_coloring,
    verify_partial_coloring,
    verify_sinkless,
)

D, K = 3, 2


@pytest.fixture(scope="module")
def star():
    return gen_2colored_regular_tree(host_degree(D, K), 1)


@pytest.fixture(scope="module")
def oracle(star):
    return MemoizedOracle.build(*star, D, K)


def _valid_inside(b: Ball, outputs):
    """2-partial condition at every node whose neighbors all lie in the ball."""
    for i in range(b.n):
        if b.dist[i] < b.radius:
            differ = sum(1 for e in b.adj[i] if e is not None and outputs[e[0]] != outputs[i])
            if differ < min(2, len(b.adj[i])):
                return False
    return True


def _root_color_at_distance_two(b: Ball, outputs):
    return any(outputs[i] == outputs[0] for i in range(b.n) if b.dist[i] == 2)


# ------------------------------------------------------------ gadget property

@pytest.mark.parametrize("d", [3, 2])
@pytest.mark.parametrize("center", ["root", "neighbor"])
def test_gadget_property_exhaustive(d, center):
    t, colors = gadget_source(d, 2)
    v = 0 if center == "root" else t.neighbors(0)[0]
    b = ball(t, v, 2, colors)
    assert b.n == (10 if d == 3 else 5)
    valid = 0
    for outs in itertools.product((WHITE, BLACK), repeat=b.n):
        if not _valid_inside(b, outs):
            continue
        valid += 1
        assert _root_color_at_distance_two(b, outs)
        assert verify_gadget_property(b, outs)
    assert valid > 0


def test_gadget_property_examples():
    assert verify_gadget_property(Ball(0, (0,), (0,), ((None,) * 3,), (1,)), [WHITE])
    t, colors = gadget_source(3, 2)
    b = ball(t, 0, 2, colors)
    outs = [WHITE if b.dist[i] == 0 else BLACK for i in range(b.n)]
    assert not verify_gadget_property(b, outs)


def test_gadgets_from_memoized_oracle(oracle):
    t_w, t_b = build_gadget_pair(oracle.view(), D, K)
    assert (t_w.root_output, t_b.root_output) == (WHITE, BLACK)
    assert t_w.ball.n == t_b.ball.n == 1 + 3 + 6
    f = oracle.view()
    assert f(t_w.ball) == WHITE and f(t_b.ball) == BLACK


def test_constant_oracle_is_disqualified():
    with pytest.raises(Disqualified):
        build_gadget_pair(constant_oracle(WHITE, 2), D, K)


def test_non_binary_outputs_are_disqualified():
    with pytest.raises(Disqualified):
        build_gadget_pair(ViewFunction(2, lambda b: "grey"), D, K)


def test_memoized_view_reproduces_source_parity(oracle):
    t, colors = gadget_source(D, K)
    f = oracle.view()
    for v in [0] + t.neighbors(0):
        assert f(ball(t, v, K, colors)) == (WHITE if t.level[v] % 2 == 0 else BLACK)


# ------------------------------------------------------------ virtual graph

def test_smallest_virtual_graph_is_a_path():
    t, colors = gadget_source(2, 1)
    t_w = Gadget(ball(t, 0, 1, colors), WHITE)
    t_b = Gadget(ball(t, 1, 1, colors), BLACK)
    host = Graph.from_edges(2, [(0, 1)])
    vg = build_virtual_graph(host, ("V", "U"), 2, 1, t_w, t_b, fill="distinct")
    g = vg.graph
    assert g.n == 9 and g.m == 8 and len(vg.merged) == 1
    assert sorted(g.degree(v) for v in range(g.n)) == [1, 1] + [2] * 7
    assert len(vg.loose_leaves) == 2 and not vg.pendants
    assert precolored_matches_gadgets(vg)


def test_virtual_graph_bookkeeping(star, oracle):
    host, labels = star
    vg = oracle.vg
    assert len(vg.merged) == host.m == 24
    assert all(vg.graph.degree(m) == D for m in vg.merged.values())
    assert precolored_matches_gadgets(vg)
    # every virtual-tree leaf of a full-degree host node is merged
    center_leaves = [v for v in vg.loose_leaves if vg.owner[v] == 0]
    assert center_leaves == []
    assert all(host.degree(vg.owner[v]) == 1 for v in vg.loose_leaves)
    assert len(vg.pendants) == (D - 2) * host.m
    assert verify_distance_coloring(vg.graph, vg.colors, K + 1) == []


def test_distance_filled_virtual_graph(star, oracle):
    host, labels = star
    vg = build_virtual_graph(host, labels, D, K, *oracle.vg.gadgets, fill="distance")
    assert verify_distance_coloring(vg.graph, vg.colors, K + 1) == []
    assert all(p is None or p == c for p, c in zip(vg.precolored, vg.colors))
    assert precolored_matches_gadgets(vg)


def test_virtual_graph_rejects_bad_hosts(oracle):
    t_w, t_b = oracle.vg.gadgets
    path_host, labels = gen_2colored_regular_tree(2, 2)
    with pytest.raises(ReductionError):
        build_virtual_graph(path_host, labels, D, K, t_w, t_b)
    host, labels = gen_2colored_regular_tree(host_degree(D, K), 1)
    with pytest.raises(ReductionError):
        build_virtual_graph(host, ["V"] * host.n, D, K, t_w, t_b)


# ------------------------------------------------------------ orientation

def test_orientation_rule(oracle):
    vg = oracle.vg
    outs = [BLACK] * vg.graph.n
    x, y = next(iter(vg.merged))
    outs[vg.merged[(x, y)]] = HOST_COLOR[vg.host_labels[x]]
    o = extract_orientation(vg, outs)
    assert (x, y) in o.arcs
    all_black = extract_orientation(vg, [BLACK] * vg.graph.n)
    v_nodes = [v for v in range(vg.host.n) if vg.host_labels[v] == "V"]
    assert all(all_black.out_degree(v) == 0 for v in v_nodes)
    assert [v.node for v in verify_sinkless(vg.host, all_black)] == [
        v for v in v_nodes if vg.host.degree(v) > 1
    ]


# ------------------------------------------------------------ end to end

def test_memoized_oracle_yields_sinkless_orientation(star):
    host, labels = star
    f = MemoizedOracle.build(host, labels, D, K).view()
    o, report, vg = run_reduction(host, labels, f, D, K)
    assert report.coloring_valid and report.sinkless and report.sound
    assert report.merged_count == host.m and report.precolored_verbatim
    assert report.distance_violations == 0 and report.root_outputs_ok
    assert verify_sinkless(host, o) == []


def test_constant_oracle_disqualified_in_pipeline(star):
    with pytest.raises(Disqualified):
        run_reduction(*star, constant_oracle(WHITE, K), D, K)


def test_corrupted_oracle_is_reported_not_trusted(star, oracle):
    host, labels = star
    table = dict(oracle.table)
    t, colors = gadget_source(D, K)
    keep = {ball(t, v, K, colors).key() for v in [0] + t.neighbors(0)}
    for key in table:
        if key not in keep:
            table[key] = WHITE
    bad = MemoizedOracle(K, table, oracle.vg).view()
    o, report, vg = run_reduction(host, labels, bad, D, K)
    doc = report.to_dict()
    assert not report.coloring_valid and doc["coloring_violations"]
    assert doc["sinkless"] is False


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.integers(0, 30))
def test_conditional_soundness(star, oracle, seed, extra):
    """Any valid coloring with the gadget roots pinned gives a sinkless orientation."""
    vg = oracle.vg
    g = vg.graph
    rng = random.Random(seed)
    fixed = {r: (0 if vg.host_labels[x] == "V" else 1) for x, r in enumerate(vg.roots)}
    for v in rng.sample(range(g.n), extra):
        fixed.setdefault(v, rng.randint(0, 1))
    need = [min(2, g.degree(v)) for v in range(g.n)]
    sol = solve_partial_two_coloring(g, need, fixed)
    assume(sol is not None)
    outs = [WHITE if c == 0 else BLACK for c in sol]
    assert verify_partial_coloring(g, outs, 2, Policy.CAPPED, vg.exempt) == []
    assert verify_sinkless(vg.host, extract_orientation(vg, outs)) == []


def test_tree_solver_small_cases():
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert solve_partial_two_coloring(path, [1, 2, 1], {}) in ([0, 1, 0], [1, 0, 1])
    assert solve_partial_two_coloring(path, [1, 2, 1], {0: 0, 2: 1}) is None
    with pytest.raises(ValueError):
        solve_partial_two_coloring(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]), [0] * 3, {})


def test_odd_depth_rounds_up(star):
    f = MemoizedOracle.build(*star, D, 1).view()
    t_w, t_b = build_gadget_pair(f, D, 1)
    assert t_w.depth == t_b.depth == 2


def test_path_host_has_no_valid_memoized_coloring():
    # d = 2 leaves no room: the pinned roots force a clash along the path
    host = Graph.from_edges(2, [(0, 1)])
    with pytest.raises(ReductionError):
        MemoizedOracle.build(host, ("V", "U"), 2, 2)
