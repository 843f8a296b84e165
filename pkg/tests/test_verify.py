import json
import math

from hypothesis import given
from hypothesis import strategies as st

from builders import complete, cycle, path
from lcl_lab.graph import Graph, gen_random_regular, gen_regular_tree
from lcl_lab.symmetry import distance_k_coloring
from lcl_lab.verify import (
    Kind,
    Policy,
    Violation,
    to_jsonl,
    verify_distance_coloring,
    verify_locally_optimal_cut,
    verify_partial_coloring,
    verify_proper_coloring,
    verify_sinkless,
)


class Arcs:
    def __init__(self, arcs):
        self.arcs = arcs


def test_partial_examples():
    assert verify_partial_coloring(cycle(4), [1, 2, 1, 2], 2) == []
    bad = verify_partial_coloring(cycle(4), [1, 1, 1, 1], 1)
    assert len(bad) == 4 and {v.kind for v in bad} == {Kind.PARTIAL_DEFICIT}


def test_partial_policies_and_exemptions():
    g = path(3)
    f = [1, 2, 1]
    assert [v.node for v in verify_partial_coloring(g, f, 2)] == [0, 2]
    assert verify_partial_coloring(g, f, 2, Policy.CAPPED) == []
    assert verify_partial_coloring(g, f, 2, "strict", exempt=[0, 2]) == []


def test_proper_examples():
    assert verify_proper_coloring(complete(4), [1, 2, 3, 4]) == []
    one_edge = Graph.from_edges(2, [(0, 1)])
    bad = verify_proper_coloring(one_edge, [1, 1])
    assert sorted(v.node for v in bad) == [0, 1]


def test_sinkless_examples():
    assert verify_sinkless(cycle(5), Arcs([(i, (i + 1) % 5) for i in range(5)])) == []
    star = gen_regular_tree(4, 1)
    inward = Arcs([(v, 0) for v in range(1, 5)])
    bad = verify_sinkless(star, inward)
    assert [v.node for v in bad] == [0] and bad[0].kind is Kind.SINK
    assert len(verify_sinkless(star, inward, exempt=[])) == 1


def test_cut_examples():
    assert verify_locally_optimal_cut(cycle(4), [0, 1, 0, 1]) == []
    assert len(verify_locally_optimal_cut(cycle(4), [1, 1, 1, 1])) == 4


def test_distance_examples():
    assert verify_distance_coloring(cycle(5), [1, 2, 3, 4, 5], 2) == []
    bad = verify_distance_coloring(path(3), [1, 2, 1], 2)
    assert sorted(v.node for v in bad) == [0, 2]
    g = gen_random_regular(50, 3, 1)
    assert verify_distance_coloring(g, distance_k_coloring(g, 2, list(range(1, 51))).colors, 2) == []


@given(st.integers(3, 7), st.integers(0, 10**6), st.data())
def test_cut_matches_half_degree_partial_coloring(d, seed, data):
    n = 2 * (d + 2)
    g = gen_random_regular(n, d, seed)
    f = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    cut_ok = not verify_locally_optimal_cut(g, f)
    partial_ok = not verify_partial_coloring(g, f, math.ceil(d / 2))
    assert cut_ok == partial_ok
    # per node as well, not just in aggregate
    assert {v.node for v in verify_locally_optimal_cut(g, f)} == {
        v.node for v in verify_partial_coloring(g, f, math.ceil(d / 2))
    }


def test_violations_serialize_as_json_lines():
    text = to_jsonl([Violation(3, Kind.SINK, {"in_degree": 2})])
    assert json.loads(text) == {"node": 3, "kind": "SINK", "in_degree": 2}
    assert to_jsonl([]) == ""
