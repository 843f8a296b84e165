"""From a 2-partial 2-coloring algorithm to a sinkless orientation.

Pipeline: evaluate the candidate view function on a colored d-regular tree
to obtain a white-rooted and a black-rooted gadget; replace every node of
a 2-colored host tree B by a virtual d-regular tree whose center copies
the matching gadget; glue virtual trees along host edges at merged leaves;
run the candidate everywhere and orient each host edge toward the endpoint
whose color its merged node does not share.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Literal, Mapping, Optional, Sequence

from .graph import Ball, Graph, ball, gen_regular_tree
from .partial import Orientation
from .sim import ViewFunction, run_view_based
from .symmetry import complete_distance_coloring, distance_k_coloring
from .verify import Policy, verify_distance_coloring, verify_partial_coloring, verify_sinkless

WHITE = "white"
BLACK = "black"
HOST_COLOR = {"V": WHITE, "U": BLACK}


class Disqualified(Exception):
    """The candidate algorithm cannot be a valid 2-partial 2-coloring."""


class ReductionError(ValueError):
    pass


def even_radius(k: int) -> int:
    return k if k % 2 == 0 else k + 1


def host_degree(d: int, k: int) -> int:
    """Leaves of a rooted depth-2k tree whose root has d children."""
    return d * (d - 1) ** (2 * k - 1)


# ----------------------------------------------------------------- gadgets

@dataclass(frozen=True)
class Gadget:
    ball: Ball
    root_output: str

    @property
    def colors(self) -> tuple[int, ...]:
        return self.ball.labels

    @property
    def depth(self) -> int:
        return self.ball.radius

    def as_graph(self) -> Graph:
        edges = [
            (i, j)
            for i, row in enumerate(self.ball.adj)
            for p in row
            if p is not None and i < (j := p[0])
        ]
        return Graph.from_edges(self.ball.n, edges)


def gadget_source(d: int, k: int) -> tuple[Graph, tuple[int, ...]]:
    """Distance-(k+1) colored d-regular tree of depth k+3."""
    t = gen_regular_tree(d, k + 3)
    colors = distance_k_coloring(t, k + 1, list(range(1, t.n + 1)))
    return t, colors.colors


def build_gadget_pair(a: ViewFunction, d: int, k: int) -> tuple[Gadget, Gadget]:
    """Return ``(T_w, T_b)``: depth-k views whose centers get white / black.

    Odd k is rounded up to the next even value; the candidate then simply
    ignores its outermost layer.
    """
    k = even_radius(k)
    if a.radius > k:
        raise ReductionError(f"algorithm radius {a.radius} exceeds gadget depth {k}")
    t, colors = gadget_source(d, k)
    probes = [0] + t.neighbors(0)
    outs = {v: a(ball(t, v, a.radius, colors)) for v in probes}
    for v, o in outs.items():
        if o not in (WHITE, BLACK):
            raise Disqualified(f"output {o!r} at node {v} is not black/white")
    differ = [v for v in probes[1:] if outs[v] != outs[0]]
    if not differ:
        raise Disqualified(f"root and all neighbors output {outs[0]}")
    w, b = (0, differ[0]) if outs[0] == WHITE else (differ[0], 0)
    return Gadget(ball(t, w, k, colors), WHITE), Gadget(ball(t, b, k, colors), BLACK)


def verify_gadget_property(gadget: Gadget | Ball, outputs: Sequence[Any]) -> bool:
    """Every even distance 2t up to the depth holds a node with the root's output."""
    b = gadget.ball if isinstance(gadget, Gadget) else gadget
    root = outputs[0]
    for dist in range(0, b.radius + 1, 2):
        if not any(outputs[i] == root for i in b.at_distance(dist)):
            return False
    return True


def _check_full_ball(b: Ball, d: int) -> None:
    for i, row in enumerate(b.adj):
        if len(row) != d:
            raise ReductionError(f"gadget node {i} has degree {len(row)}, expected {d}")
        inside = sum(p is not None for p in row)
        if b.dist[i] < b.radius and inside != d:
            raise ReductionError(f"gadget node {i} is missing neighbors inside the gadget")


# ---------------------------------------------------------- virtual graph

@dataclass
class _Template:
    rows: list[list[Optional[tuple[int, int]]]]
    dist: list[int]
    leaves: list[int]
    gadget_size: int


def _virtual_tree(g: Gadget, d: int, depth: int) -> _Template:
    _check_full_ball(g.ball, d)
    rows = [list(r) for r in g.ball.adj]
    dist = list(g.ball.dist)
    i = 0
    while i < len(rows):
        if dist[i] < depth:
            for p in range(len(rows[i])):
                if rows[i][p] is None:
                    j = len(rows)
                    child_deg = 1 if dist[i] + 1 == depth else d
                    rows.append([(i, p)] + [None] * (child_deg - 1))
                    dist.append(dist[i] + 1)
                    rows[i][p] = (j, 0)
        i += 1
    leaves = [i for i in range(len(rows)) if dist[i] == depth]
    return _Template(rows, dist, leaves, g.ball.n)


@dataclass
class VirtualGraph:
    graph: Graph
    host: Graph
    host_labels: tuple[str, ...]
    d: int
    k: int
    roots: tuple[int, ...]
    owner: tuple[int, ...]
    merged: dict[tuple[int, int], int]
    pendants: tuple[int, ...]
    loose_leaves: tuple[int, ...]
    gadget_nodes: tuple[tuple[int, ...], ...]
    precolored: tuple[Optional[int], ...]
    colors: tuple[int, ...]
    gadgets: tuple[Gadget, Gadget] = field(repr=False, default=None)  # type: ignore[assignment]

    @property
    def exempt(self) -> frozenset[int]:
        return frozenset(self.pendants) | frozenset(self.loose_leaves)

    def sidecar(self) -> dict[str, Any]:
        return {
            "d": self.d,
            "k": self.k,
            "roots": list(self.roots),
            "owner": list(self.owner),
            "merged": [[x, y, m] for (x, y), m in sorted(self.merged.items())],
            "pendants": list(self.pendants),
            "loose_leaves": list(self.loose_leaves),
            "colors": list(self.colors),
            "host_labels": list(self.host_labels),
        }


def build_virtual_graph(
    host: Graph,
    host_labels: Sequence[str],
    d: int,
    k: int,
    t_w: Gadget,
    t_b: Gadget,
    *,
    fill: Literal["distance", "distinct"] = "distance",
    ids: Optional[Sequence[int]] = None,
) -> VirtualGraph:
    """Glue per-host virtual trees of depth 2k along host edges.

    The merged node for host edge {x, y} (x < y) uses port 0 toward x's
    tree, port 1 toward y's tree, and ports 2..d-1 for pendants. Nodes
    are numbered host by host in template order; pendants come last.
    ``fill="distinct"`` gives every non-gadget node its own fresh color,
    otherwise the remaining nodes are colored by distance-(k+1) completion.
    """
    if d < 2 or k < 1:
        raise ReductionError("need d >= 2 and k >= 1")
    delta = host_degree(d, k)
    if len(host_labels) != host.n:
        raise ReductionError("one host label per node required")
    for v in range(host.n):
        if host.degree(v) not in (1, delta):
            raise ReductionError(
                f"host node {v} has degree {host.degree(v)}; expected {delta} (or 1 at leaves)"
            )
        if host_labels[v] not in HOST_COLOR:
            raise ReductionError(f"host label {host_labels[v]!r} not in V/U")
    for x, y, _, _ in host.edges():
        if host_labels[x] == host_labels[y]:
            raise ReductionError(f"host edge {x}-{y} inside one side of the bipartition")
    if host.m != host.n - 1:
        raise ReductionError("host must be a tree")
    if t_w.depth != k or t_b.depth != k:
        raise ReductionError(f"gadget depth must equal k={k}")

    tmpl = {"V": _virtual_tree(t_w, d, 2 * k), "U": _virtual_tree(t_b, d, 2 * k)}
    for t in tmpl.values():
        if len(t.leaves) != delta:
            raise ReductionError(f"virtual tree has {len(t.leaves)} leaves, host degree {delta}")

    partner: dict[tuple[int, int], tuple[int, int]] = {}
    for x, y, px, py in host.edges():
        partner[(x, tmpl[host_labels[x]].leaves[px])] = (y, tmpl[host_labels[y]].leaves[py])
        partner[(y, tmpl[host_labels[y]].leaves[py])] = (x, tmpl[host_labels[x]].leaves[px])

    gid: dict[tuple[int, int], int] = {}
    owner: list[int] = []
    side_port: dict[tuple[int, int], int] = {}
    merged: dict[tuple[int, int], int] = {}
    for x in range(host.n):
        for i in range(len(tmpl[host_labels[x]].rows)):
            other = partner.get((x, i))
            if other is not None and other in gid:
                gid[(x, i)] = gid[other]
                side_port[(x, i)] = 1
                owner[gid[other]] = -1
                merged[(min(x, other[0]), max(x, other[0]))] = gid[other]
            else:
                gid[(x, i)] = len(owner)
                owner.append(x)
                side_port[(x, i)] = 0

    edges = []
    for x in range(host.n):
        rows = tmpl[host_labels[x]].rows
        for i, row in enumerate(rows):
            for p, tgt in enumerate(row):
                if tgt is None:
                    raise ReductionError("virtual tree has an unfilled port")
                j, bp = tgt
                if i < j:
                    pj = side_port[(x, j)] if (x, j) in partner else bp
                    edges.append((gid[(x, i)], gid[(x, j)], p, pj))

    pendants = []
    for m in sorted(merged.values()):
        for s in range(d - 2):
            pend = len(owner)
            owner.append(-1)
            pendants.append(pend)
            edges.append((m, pend, 2 + s, 0))

    graph = Graph.from_port_edges(len(owner), edges)
    roots = tuple(gid[(x, 0)] for x in range(host.n))
    loose = tuple(
        gid[(x, i)]
        for x in range(host.n)
        for i in tmpl[host_labels[x]].leaves
        if (x, i) not in partner
    )

    precolored: list[Optional[int]] = [None] * graph.n
    gadget_nodes = []
    for x in range(host.n):
        g = t_w if host_labels[x] == "V" else t_b
        nodes = tuple(gid[(x, i)] for i in range(g.ball.n))
        gadget_nodes.append(nodes)
        for i, v in enumerate(nodes):
            precolored[v] = g.colors[i]

    if fill == "distinct":
        top = max(c for c in precolored if c is not None)
        colors = list(precolored)
        fresh = top
        for v in range(graph.n):
            if colors[v] is None:
                fresh += 1
                colors[v] = fresh
        final = tuple(colors)  # type: ignore[arg-type]
    elif fill == "distance":
        ids = ids if ids is not None else list(range(1, graph.n + 1))
        final = complete_distance_coloring(graph, k + 1, precolored, ids).colors
    else:
        raise ValueError(f"unknown fill {fill!r}")

    return VirtualGraph(
        graph=graph,
        host=host,
        host_labels=tuple(host_labels),
        d=d,
        k=k,
        roots=roots,
        owner=tuple(owner),
        merged=merged,
        pendants=tuple(pendants),
        loose_leaves=loose,
        gadget_nodes=tuple(gadget_nodes),
        precolored=tuple(precolored),
        colors=final,
        gadgets=(t_w, t_b),
    )


def precolored_matches_gadgets(vg: VirtualGraph) -> bool:
    """Radius-k view of every host root equals its gadget, ports and colors included."""
    t_w, t_b = vg.gadgets
    for x, r in enumerate(vg.roots):
        g = t_w if vg.host_labels[x] == "V" else t_b
        if ball(vg.graph, r, vg.k, vg.colors).key() != g.ball.key():
            return False
    return True


# ------------------------------------------------------------ orientation

def extract_orientation(vg: VirtualGraph, merged_outputs: Mapping[int, str] | Sequence[str]) -> Orientation:
    """Orient host edge y -> z iff the merged node's output equals y's color."""
    arcs = []
    for x, y, _, _ in vg.host.edges():
        m = vg.merged[(x, y)]
        try:
            out = merged_outputs[m]
        except (KeyError, IndexError):
            raise ReductionError(f"no output for merged node {m} of host edge {x}-{y}") from None
        cx = HOST_COLOR[vg.host_labels[x]]
        cy = HOST_COLOR[vg.host_labels[y]]
        if out == cx:
            arcs.append((x, y))
        elif out == cy:
            arcs.append((y, x))
        else:
            raise ReductionError(f"merged node {m} output {out!r} is not black/white")
    return Orientation(vg.host.n, tuple(arcs))


@dataclass
class ReductionReport:
    host_edges: int
    merged_count: int
    merged_degree_ok: bool
    precolored_verbatim: bool
    distance_violations: int
    root_outputs_ok: bool
    coloring_violations: list[dict[str, Any]]
    sinkless_violations: list[dict[str, Any]]

    @property
    def coloring_valid(self) -> bool:
        return not self.coloring_violations

    @property
    def sinkless(self) -> bool:
        return not self.sinkless_violations

    @property
    def sound(self) -> bool:
        """A valid coloring must come with a sinkless orientation."""
        return self.sinkless or not self.coloring_valid

    def to_dict(self) -> dict[str, Any]:
        return {
            "host_edges": self.host_edges,
            "merged_count": self.merged_count,
            "merged_degree_ok": self.merged_degree_ok,
            "precolored_verbatim": self.precolored_verbatim,
            "distance_violations": self.distance_violations,
            "root_outputs_ok": self.root_outputs_ok,
            "coloring_valid": self.coloring_valid,
            "coloring_violations": self.coloring_violations,
            # sinklessness is only claimed when the coloring it rests on is valid
            "sinkless": self.sinkless and self.coloring_valid,
            "sinkless_violations": self.sinkless_violations,
            "sound": self.sound,
        }


def run_reduction(
    host: Graph,
    host_labels: Sequence[str],
    a: ViewFunction,
    d: int,
    k: int,
    *,
    fill: Literal["distance", "distinct"] = "distinct",
) -> tuple[Orientation, ReductionReport, VirtualGraph]:
    t_w, t_b = build_gadget_pair(a, d, k)
    vg = build_virtual_graph(host, host_labels, d, t_w.depth, t_w, t_b, fill=fill)
    outputs = run_view_based(vg.graph, a, vg.colors)
    o = extract_orientation(vg, outputs)
    col_viol = verify_partial_coloring(vg.graph, outputs, 2, Policy.CAPPED, vg.exempt)
    sink_viol = verify_sinkless(host, o)
    report = ReductionReport(
        host_edges=host.m,
        merged_count=len(vg.merged),
        merged_degree_ok=all(vg.graph.degree(m) == d for m in vg.merged.values()),
        precolored_verbatim=precolored_matches_gadgets(vg),
        distance_violations=len(verify_distance_coloring(vg.graph, vg.colors, vg.k + 1)),
        root_outputs_ok=all(
            outputs[r] == HOST_COLOR[vg.host_labels[x]] for x, r in enumerate(vg.roots)
        ),
        coloring_violations=[v.to_dict() for v in col_viol],
        sinkless_violations=[v.to_dict() for v in sink_viol],
    )
    return o, report, vg


# ------------------------------------------------------------ test oracles

def constant_oracle(color: str = WHITE, radius: int = 2) -> ViewFunction:
    return ViewFunction(radius, lambda b: color, name=f"constant-{color}")


def solve_partial_two_coloring(
    g: Graph, need: Sequence[int], fixed: Mapping[int, int]
) -> Optional[list[int]]:
    """Colors in {0, 1} on a forest giving node v at least need[v] differing neighbors.

    Tree DP over (own color, parent color); returns None if infeasible.
    """
    if g.m != g.n - _components(g):
        raise ValueError("solver needs a forest")
    parent = [-1] * g.n
    order: list[int] = []
    seen = [False] * g.n
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            for u, _ in g.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    parent[u] = v
                    q.append(u)
    children: dict[int, list[int]] = defaultdict(list)
    for v in order:
        if parent[v] >= 0:
            children[parent[v]].append(v)

    # opts[v][cp] = colors v may take when its parent has color cp
    opts: list[dict[Optional[int], tuple[int, ...]]] = [dict() for _ in range(g.n)]
    for v in reversed(order):
        allowed = [fixed[v]] if v in fixed else [0, 1]
        parents = [None] if parent[v] < 0 else [0, 1]
        for cp in parents:
            ok = []
            for cv in allowed:
                ch_opts = [opts[ch][cv] for ch in children[v]]
                if any(not o for o in ch_opts):
                    continue
                diff = sum(1 for o in ch_opts if 1 - cv in o) + (cp is not None and cp != cv)
                if diff >= need[v]:
                    ok.append(cv)
            opts[v][cp] = tuple(ok)

    color = [-1] * g.n
    for v in order:
        if parent[v] < 0:
            if not opts[v][None]:
                return None
            color[v] = opts[v][None][0]
        else:
            # prefer differing from the parent whenever that stays feasible
            cp = color[parent[v]]
            o = opts[v][cp]
            color[v] = (1 - cp) if (1 - cp) in o else o[0]
    return color


def _components(g: Graph) -> int:
    seen = [False] * g.n
    count = 0
    for s in range(g.n):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for u, _ in g.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
    return count


@dataclass
class MemoizedOracle:
    """Finite-instance stand-in for a constant-round algorithm.

    The table maps radius-k views to outputs. It covers the gadget source
    tree (colored by level parity, root white) and one fixed virtual graph,
    whose coloring is solved globally with the host roots pinned to the
    output their gadget forces. Views must be unique apart from those roots.
    """

    k: int
    table: dict[Hashable, str]
    vg: VirtualGraph

    def view(self) -> ViewFunction:
        table = self.table

        def lookup(b: Ball) -> str:
            try:
                return table[b.key()]
            except KeyError:
                raise ReductionError("view outside the memoized instance") from None

        return ViewFunction(self.k, lookup, name="memoized")

    @classmethod
    def build(
        cls,
        host: Graph,
        host_labels: Sequence[str],
        d: int,
        k: int,
        fill: Literal["distance", "distinct"] = "distinct",
    ) -> "MemoizedOracle":
        k = even_radius(k)
        t, tcolors = gadget_source(d, k)
        assert t.level is not None
        table: dict[Hashable, str] = {}
        for v in [0] + t.neighbors(0):
            table[ball(t, v, k, tcolors).key()] = WHITE if t.level[v] % 2 == 0 else BLACK
        oracle = cls(k, table, None)  # type: ignore[arg-type]
        t_w, t_b = build_gadget_pair(oracle.view(), d, k)
        vg = build_virtual_graph(host, host_labels, d, k, t_w, t_b, fill=fill)
        keys = [ball(vg.graph, v, k, vg.colors).key() for v in range(vg.graph.n)]
        groups: dict[Hashable, list[int]] = defaultdict(list)
        for v, key in enumerate(keys):
            groups[key].append(v)
        fixed: dict[int, int] = {}
        for key, members in groups.items():
            if key in table:
                for v in members:
                    fixed[v] = 0 if table[key] == WHITE else 1
            elif len(members) > 1:
                raise ReductionError(
                    f"{len(members)} virtual nodes share a view; memoization needs distinct views"
                )
        need = [min(2, vg.graph.degree(v)) for v in range(vg.graph.n)]
        sol = solve_partial_two_coloring(vg.graph, need, fixed)
        if sol is None:
            raise ReductionError("no 2-partial 2-coloring consistent with the gadget roots")
        for v, key in enumerate(keys):
            table[key] = WHITE if sol[v] == 0 else BLACK
        oracle.vg = vg
        return oracle


def memoized_oracle(host: Graph, host_labels: Sequence[str], d: int, k: int) -> ViewFunction:
    return MemoizedOracle.build(host, host_labels, d, k).view()
