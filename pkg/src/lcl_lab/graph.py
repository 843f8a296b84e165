"""Port-numbered graphs, generators, balls and power graphs.

A node's ports are the positions in its adjacency list. Each entry is a
``(neighbor, back_port)`` pair, so ``adj[v][i] == (u, j)`` implies
``adj[u][j] == (v, i)``. Generators assign ports in edge insertion order.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Optional, Sequence

Port = tuple[int, int]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    adj: tuple[tuple[Port, ...], ...]
    level: Optional[tuple[int, ...]] = None
    source: Optional[tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        check_ports(self.adj)

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @property
    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def regular_degree(self) -> Optional[int]:
        """The common degree if the graph is regular, else None."""
        degs = {len(a) for a in self.adj}
        if len(degs) == 1:
            return degs.pop()
        return None

    def neighbors(self, v: int) -> list[int]:
        return [u for u, _ in self.adj[v]]

    def edges(self) -> Iterator[tuple[int, int, int, int]]:
        """Each edge once as ``(u, v, pu, pv)`` with ``u < v``, ordered by (u, pu)."""
        for u, ports in enumerate(self.adj):
            for pu, (v, pv) in enumerate(ports):
                if u < v:
                    yield u, v, pu, pv

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw: Any) -> "Graph":
        """Build a graph assigning ports in the order edges are given."""
        adj: list[list[Port]] = [[] for _ in range(n)]
        for u, v in edges:
            pu, pv = len(adj[u]), len(adj[v])
            adj[u].append((v, pv))
            adj[v].append((u, pu))
        return cls(tuple(tuple(a) for a in adj), **kw)

    @classmethod
    def from_port_edges(
        cls, n: int, edges: Iterable[tuple[int, int, int, int]], **kw: Any
    ) -> "Graph":
        """Build a graph from explicit ``(u, v, pu, pv)`` records."""
        slots: list[dict[int, Port]] = [{} for _ in range(n)]
        for u, v, pu, pv in edges:
            if pu in slots[u] or pv in slots[v]:
                raise GraphError(f"port used twice on edge {u}-{v}")
            slots[u][pu] = (v, pv)
            slots[v][pv] = (u, pu)
        adj = []
        for v, s in enumerate(slots):
            if sorted(s) != list(range(len(s))):
                raise GraphError(f"ports of node {v} are not contiguous: {sorted(s)}")
            adj.append(tuple(s[i] for i in range(len(s))))
        return cls(tuple(adj), **kw)


def check_ports(adj: Sequence[Sequence[Port]]) -> None:
    n = len(adj)
    for v, ports in enumerate(adj):
        seen = set()
        for i, (u, j) in enumerate(ports):
            if not 0 <= u < n:
                raise GraphError(f"node {v} port {i} points outside the graph")
            if u == v:
                raise GraphError(f"self-loop at node {v}")
            if u in seen:
                raise GraphError(f"parallel edge {v}-{u}")
            seen.add(u)
            if j >= len(adj[u]) or adj[u][j] != (v, i):
                raise GraphError(f"port asymmetry at node {v} port {i}")


# ---------------------------------------------------------------- generators

RESTART_CAP = 10_000


def gen_random_regular(n: int, d: int, seed: int) -> Graph:
    """Uniform-ish simple d-regular graph by stub pairing.

    Stubs are shuffled and paired; pairs that would form a loop or a
    repeated edge are returned to the pool and re-paired. A dead end
    (no legal pair left) restarts the whole construction. Deterministic
    for a fixed ``seed``.
    """
    check_regular_params(n, d)
    rng = random.Random(seed)
    for _ in range(RESTART_CAP):
        edges = _try_pairing(n, d, rng)
        if edges is not None:
            return Graph.from_edges(n, edges)
    raise GraphError(f"restart budget {RESTART_CAP} exhausted (seed={seed})")


def check_regular_params(n: int, d: int) -> None:
    if d < 0:
        raise GraphError("degree must be nonnegative")
    if (n * d) % 2:
        raise GraphError(f"n*d must be even (n={n}, d={d})")
    if n < d + 1:
        raise GraphError(f"need n >= d+1 for a simple {d}-regular graph (n={n})")


def _try_pairing(n: int, d: int, rng: random.Random) -> Optional[list[tuple[int, int]]]:
    edges: list[tuple[int, int]] = []
    present: set[tuple[int, int]] = set()
    stubs = [v for v in range(n) for _ in range(d)]
    while stubs:
        rng.shuffle(stubs)
        leftover: list[int] = []
        for a, b in zip(stubs[::2], stubs[1::2]):
            e = (a, b) if a < b else (b, a)
            if a != b and e not in present:
                present.add(e)
                edges.append(e)
            else:
                leftover += (a, b)
        if leftover and not _pairable(leftover, present):
            return None
        stubs = leftover
    return edges


def _pairable(stubs: list[int], present: set[tuple[int, int]]) -> bool:
    nodes = sorted(set(stubs))
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if (a, b) not in present:
                return True
    return False


def gen_regular_tree(d: int, depth: int) -> Graph:
    """Rooted tree: the root has d children, every other internal node d-1.

    Node 0 is the root; nodes are numbered in BFS order. A non-root node's
    port 0 leads to its parent.
    """
    if d < 2:
        raise GraphError("tree degree must be >= 2")
    if depth < 0:
        raise GraphError("depth must be >= 0")
    edges = []
    level = [0]
    frontier = [0]
    for lv in range(1, depth + 1):
        nxt = []
        for p in frontier:
            for _ in range(d if p == 0 else d - 1):
                c = len(level)
                level.append(lv)
                edges.append((p, c))
                nxt.append(c)
        frontier = nxt
    # children are created after their parent's parent edge, so a child's
    # first edge is to its parent
    return Graph.from_edges(len(level), edges, level=tuple(level))


def regular_tree_size(d: int, depth: int) -> int:
    if depth == 0:
        return 1
    if d == 2:
        return 1 + 2 * depth
    return 1 + d * ((d - 1) ** depth - 1) // (d - 2)


def gen_2colored_regular_tree(D: int, depth: int) -> tuple[Graph, tuple[str, ...]]:
    """Regular tree plus bipartition labels: even levels ``"V"``, odd ``"U"``."""
    g = gen_regular_tree(D, depth)
    assert g.level is not None
    return g, tuple("V" if lv % 2 == 0 else "U" for lv in g.level)


# ------------------------------------------------------------ balls, powers

def bfs_distances(g: Graph, v: int, limit: Optional[int] = None) -> dict[int, int]:
    dist = {v: 0}
    q = deque([v])
    while q:
        x = q.popleft()
        if limit is not None and dist[x] >= limit:
            continue
        for y, _ in g.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def diameter(g: Graph) -> float:
    """Exact diameter by BFS from every node; ``inf`` if disconnected."""
    best = 0
    for v in range(g.n):
        dist = bfs_distances(g, v)
        if len(dist) < g.n:
            return float("inf")
        best = max(best, max(dist.values()))
    return best


def power_graph(g: Graph, k: int) -> Graph:
    """Edge {u, v} iff 1 <= dist(u, v) <= k. Ports follow sorted neighbor order."""
    if k < 1:
        raise GraphError("power radius must be >= 1")
    edges = []
    for v in range(g.n):
        for u in sorted(bfs_distances(g, v, k)):
            if u > v:
                edges.append((v, u))
    return Graph.from_edges(g.n, edges)


@dataclass(frozen=True)
class Ball:
    """Radius-r view around a node, in canonical local numbering.

    Local node 0 is the center; the others follow BFS order over ports.
    ``adj[i][p]`` is ``(local_neighbor, back_port)`` or None when port p
    leads out of the view. Edges joining two nodes at the full radius are
    outside the view too, so the ball is exactly what r rounds can collect.
    """

    radius: int
    nodes: tuple[int, ...]
    dist: tuple[int, ...]
    adj: tuple[tuple[Optional[Port], ...], ...]
    labels: tuple[Any, ...]

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def center(self) -> int:
        return self.nodes[0]

    def key(self) -> Hashable:
        """Content of the view without host identities."""
        return (self.radius, self.adj, self.labels)

    def at_distance(self, r: int) -> list[int]:
        return [i for i, d in enumerate(self.dist) if d == r]


def ball(g: Graph, v: int, r: int, labels: Optional[Sequence[Any]] = None) -> Ball:
    if r < 0:
        raise GraphError("radius must be >= 0")
    local = {v: 0}
    order = [v]
    dist = [0]
    i = 0
    while i < len(order):
        x = order[i]
        if dist[i] < r:
            for y, _ in g.adj[x]:
                if y not in local:
                    local[y] = len(order)
                    order.append(y)
                    dist.append(dist[i] + 1)
        i += 1
    adj = []
    for idx, x in enumerate(order):
        row: list[Optional[Port]] = []
        for y, j in g.adj[x]:
            if y in local and (dist[idx] < r or dist[local[y]] < r):
                row.append((local[y], j))
            else:
                row.append(None)
        adj.append(tuple(row))
    labs = tuple(labels[x] for x in order) if labels is not None else tuple(order)
    return Ball(r, tuple(order), tuple(dist), tuple(adj), labs)


# ------------------------------------------------------------- edge lists

def write_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.m} {g.max_degree}"]
    lines += [f"{u} {v} {pu} {pv}" for u, v, pu, pv in g.edges()]
    return "\n".join(lines) + "\n"


def read_edgelist(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 3:
        raise GraphError("missing 'n m d' header")
    n, m, d = map(int, rows[0])
    recs = [tuple(map(int, r)) for r in rows[1:]]
    if len(recs) != m or any(len(r) != 4 for r in recs):
        raise GraphError(f"expected {m} edge records of 4 fields")
    g = Graph.from_port_edges(n, recs)  # type: ignore[arg-type]
    if g.max_degree != d:
        raise GraphError(f"header degree {d} != max degree {g.max_degree}")
    return g


def to_dot(g: Graph, colors: Optional[Sequence[Any]] = None) -> str:
    out = ["graph G {"]
    for v in range(g.n):
        lab = f' [label="{v}:{colors[v]}"]' if colors is not None else ""
        out.append(f"  {v}{lab};")
    for u, v, pu, pv in g.edges():
        out.append(f'  {u} -- {v} [taillabel="{pu}", headlabel="{pv}"];')
    out.append("}")
    return "\n".join(out) + "\n"
