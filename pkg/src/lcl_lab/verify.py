"""Independent checkers. They read only the graph and the output under test."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

from .graph import Graph, bfs_distances


class Kind(str, enum.Enum):
    PARTIAL_DEFICIT = "PARTIAL_DEFICIT"
    IMPROPER_EDGE = "IMPROPER_EDGE"
    SINK = "SINK"
    CUT_IMPROVABLE = "CUT_IMPROVABLE"
    DISTANCE_CLASH = "DISTANCE_CLASH"


class Policy(str, enum.Enum):
    STRICT = "strict"
    CAPPED = "capped"


@dataclass(frozen=True)
class Violation:
    node: int
    kind: Kind
    detail: dict[str, Any] = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {"node": self.node, "kind": self.kind.value, **self.detail}


def to_jsonl(violations: Iterable[Violation]) -> str:
    return "".join(json.dumps(v.to_dict(), sort_keys=True) + "\n" for v in violations)


def verify_partial_coloring(
    g: Graph,
    f: Sequence[Any],
    k: int,
    policy: Policy | str = Policy.STRICT,
    exempt: Iterable[int] = (),
) -> list[Violation]:
    """Nodes (outside ``exempt``) with fewer than k differently colored neighbors.

    CAPPED lowers the requirement to min(k, deg(v)).
    """
    policy = Policy(policy)
    skip = set(exempt)
    out = []
    for v in range(g.n):
        if v in skip:
            continue
        proper = sum(1 for u, _ in g.adj[v] if f[u] != f[v])
        need = k if policy is Policy.STRICT else min(k, len(g.adj[v]))
        if proper < need:
            out.append(Violation(v, Kind.PARTIAL_DEFICIT, {"proper": proper, "need": need}))
    return out


def verify_proper_coloring(g: Graph, f: Sequence[Any]) -> list[Violation]:
    out = []
    for u, v, _, _ in g.edges():
        if f[u] == f[v]:
            out.append(Violation(u, Kind.IMPROPER_EDGE, {"witness": v, "color": f[u]}))
            out.append(Violation(v, Kind.IMPROPER_EDGE, {"witness": u, "color": f[u]}))
    return out


def verify_sinkless(g: Graph, o: Any, exempt: Optional[Iterable[int]] = None) -> list[Violation]:
    """Non-exempt nodes without an outgoing edge.

    ``o`` is anything with an ``arcs`` sequence of ``(tail, head)`` pairs.
    With ``exempt=None``, trees exempt their leaves and other graphs nothing.
    """
    if exempt is None:
        is_tree = g.m == g.n - 1
        exempt = [v for v in range(g.n) if is_tree and g.degree(v) == 1]
    skip = set(exempt)
    outdeg = [0] * g.n
    for tail, _ in o.arcs:
        outdeg[tail] += 1
    return [
        Violation(v, Kind.SINK, {"in_degree": g.degree(v)})
        for v in range(g.n)
        if v not in skip and outdeg[v] == 0
    ]


def verify_locally_optimal_cut(g: Graph, f: Sequence[Any]) -> list[Violation]:
    """Nodes whose flip would cut more edges: more same-colored than other neighbors."""
    out = []
    for v in range(g.n):
        same = sum(1 for u, _ in g.adj[v] if f[u] == f[v])
        diff = len(g.adj[v]) - same
        if same > diff:
            out.append(Violation(v, Kind.CUT_IMPROVABLE, {"same": same, "different": diff}))
    return out


def verify_distance_coloring(g: Graph, f: Sequence[Any], k: int) -> list[Violation]:
    out = []
    for v in range(g.n):
        for u, d in sorted(bfs_distances(g, v, k).items()):
            if u > v and f[u] == f[v]:
                out.append(Violation(v, Kind.DISTANCE_CLASH, {"witness": u, "distance": d}))
                out.append(Violation(u, Kind.DISTANCE_CLASH, {"witness": v, "distance": d}))
    return out
