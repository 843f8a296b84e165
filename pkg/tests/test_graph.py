import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import complete, cycle, path, to_nx
from lcl_lab.graph import (
    Graph,
    GraphError,
    ball,
    bfs_distances,
    check_ports,
    diameter,
    gen_2colored_regular_tree,
    gen_random_regular,
    gen_regular_tree,
    power_graph,
    read_edgelist,
    regular_tree_size,
    to_dot,
    write_edgelist,
)


@st.composite
def regular_params(draw, max_n=60, max_d=7):
    d = draw(st.integers(1, max_d))
    n = draw(st.integers(d + 1, max_n))
    if (n * d) % 2:
        n += 1
    return n, d, draw(st.integers(0, 10**6))


# ------------------------------------------------------------ generators

def test_k4_is_the_only_cubic_graph_on_four_nodes():
    for seed in range(5):
        g = gen_random_regular(4, 3, seed)
        assert {(u, v) for u, v, _, _ in g.edges()} == set(itertools.combinations(range(4), 2))


@pytest.mark.parametrize("n,d", [(3, 3), (5, 3), (2, 5)])
def test_random_regular_rejects_impossible_parameters(n, d):
    with pytest.raises(GraphError):
        gen_random_regular(n, d, 0)


def test_random_regular_degree_scan():
    g = gen_random_regular(100, 5, 7)
    assert all(len(row) == 5 for row in g.adj)
    assert nx.is_regular(to_nx(g)) and to_nx(g).number_of_edges() == 250


@given(regular_params())
def test_random_regular_is_simple_regular_and_seeded(params):
    n, d, seed = params
    g = gen_random_regular(n, d, seed)
    check_ports(g.adj)
    h = to_nx(g)
    assert h.number_of_edges() == n * d // 2
    assert all(deg == d for _, deg in h.degree())
    assert gen_random_regular(n, d, seed).adj == g.adj


def test_high_degree_generation_terminates():
    g = gen_random_regular(200, 11, 3)
    assert g.regular_degree() == 11


@pytest.mark.parametrize(
    "d,depth,n", [(3, 2, 10), (2, 5, 11), (3, 0, 1), (4, 3, 1 + 4 + 12 + 36)]
)
def test_regular_tree_sizes(d, depth, n):
    g = gen_regular_tree(d, depth)
    assert g.n == n == regular_tree_size(d, depth)
    assert nx.is_tree(to_nx(g))
    dist = bfs_distances(g, 0)
    assert g.level == tuple(dist[v] for v in range(g.n))


def test_two_regular_tree_is_a_path():
    assert nx.is_isomorphic(to_nx(gen_regular_tree(2, 5)), nx.path_graph(11))


def test_tree_port_zero_leads_to_parent():
    g = gen_regular_tree(3, 3)
    for v in range(1, g.n):
        parent = g.adj[v][0][0]
        assert g.level[parent] == g.level[v] - 1


def test_two_colored_trees():
    g, lab = gen_2colored_regular_tree(2, 2)
    assert g.n == 5 and [lab[v] for v in range(3)] == ["V", "U", "U"]
    assert {lab[v] for v in range(g.n) if g.level[v] == 2} == {"V"}
    star, lab = gen_2colored_regular_tree(24, 1)
    assert star.n == 25 and star.degree(0) == 24 and lab[0] == "V"
    g, lab = gen_2colored_regular_tree(3, 3)
    assert all(lab[u] != lab[v] for u, v, _, _ in g.edges())


# ------------------------------------------------------------ powers, balls

def test_power_graph_examples():
    assert all(len(row) == 4 for row in power_graph(cycle(6), 2).adj)
    g = gen_random_regular(20, 3, 1)
    assert {(u, v) for u, v, _, _ in power_graph(g, 1).edges()} == {
        (u, v) for u, v, _, _ in g.edges()
    }
    tri = power_graph(path(3), 2)
    assert tri.m == 3 and tri.regular_degree() == 2


@given(regular_params(max_n=30, max_d=4), st.integers(1, 3))
def test_power_graph_matches_networkx(params, k):
    n, d, seed = params
    g = gen_random_regular(n, d, seed)
    p = power_graph(g, k)
    check_ports(p.adj)
    assert nx.utils.graphs_equal(to_nx(p), nx.power(to_nx(g), k))


def test_ball_examples():
    g = gen_random_regular(10, 3, 0)
    b = ball(g, 4, 0, labels=list("abcdefghij"))
    assert b.n == 1 and b.labels == ("e",) and all(p is None for p in b.adj[0])
    assert ball(cycle(5), 0, 2).n == 5
    assert ball(gen_regular_tree(3, 3), 0, 2).n == 10


@given(regular_params(max_n=40, max_d=5), st.integers(0, 4), st.data())
def test_ball_nodes_are_the_bfs_ball(params, r, data):
    n, d, seed = params
    g = gen_random_regular(n, d, seed)
    v = data.draw(st.integers(0, n - 1))
    b = ball(g, v, r)
    oracle = nx.single_source_shortest_path_length(to_nx(g), v, cutoff=r)
    assert set(b.nodes) == set(oracle)
    assert all(b.dist[i] == oracle[x] for i, x in enumerate(b.nodes))
    # every visible edge is a real edge with a matching back port
    for i, row in enumerate(b.adj):
        for p, e in enumerate(row):
            if e is not None:
                j, q = e
                assert b.adj[j][q] == (i, p)
                assert g.adj[b.nodes[i]][p] == (b.nodes[j], q)


def test_ball_hides_edges_between_boundary_nodes():
    b = ball(cycle(5), 0, 2)
    far = b.at_distance(2)
    assert len(far) == 2
    assert all(e is None or b.dist[e[0]] < 2 for i in far for e in b.adj[i])


def test_diameter():
    assert diameter(cycle(8)) == 4
    assert diameter(complete(5)) == 1


# ------------------------------------------------------------ validation, I/O

def test_port_asymmetry_rejected():
    with pytest.raises(GraphError):
        Graph((((1, 0),), ((0, 1),)))
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(1, [(0, 0)])


@given(regular_params())
def test_edgelist_round_trip(params):
    g = gen_random_regular(*params)
    assert read_edgelist(write_edgelist(g)).adj == g.adj


def test_edgelist_rejects_bad_input():
    with pytest.raises(GraphError):
        read_edgelist("3 1 1\n0 1 0 0\n0 2 1 0\n")
    with pytest.raises(GraphError):
        read_edgelist("2 1 5\n0 1 0 0\n")
    with pytest.raises(GraphError):
        read_edgelist("")


def test_dot_lists_every_edge():
    text = to_dot(cycle(4), [1, 2, 1, 2])
    assert text.count("--") == 4 and '"0:1"' in text
