"""O(log* n) symmetry breaking: Linial coloring, color reduction, MIS.

Every algorithm here runs through :func:`lcl_lab.sim.run_rounds`; the
returned :class:`Coloring` carries the measured ``rounds_used``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Mapping, Optional, Sequence

from .graph import Graph, power_graph
from .sim import RoundAlgorithm, run_rounds

# Linial palette bound: at most LINIAL_K * D^2 * max(1, log2 D) + LINIAL_K0
# colors for max degree D. The fixpoint uses a prime q in (2D, 4D+2) with
# degree-2 polynomials, so q^2 < 16 D^2 + 16 D + 4, which this covers.
LINIAL_K = 16
LINIAL_K0 = 64


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    palette_size: int
    rounds_used: int = 0

    def __post_init__(self) -> None:
        if self.colors and (min(self.colors) < 1 or max(self.colors) > self.palette_size):
            raise ColoringError(f"colors must lie in 1..{self.palette_size}")

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __len__(self) -> int:
        return len(self.colors)

    def to_json(self) -> str:
        return json.dumps(list(self.colors))


def is_proper(g: Graph, colors: Sequence[int]) -> bool:
    return all(colors[u] != colors[v] for u, v, _, _ in g.edges())


def _require_proper(g: Graph, colors: Sequence[int]) -> None:
    for u, v, _, _ in g.edges():
        if colors[u] == colors[v]:
            raise ColoringError(f"coloring not proper: edge {u}-{v} has color {colors[u]}")


# ---------------------------------------------------------------- Linial

def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % p for p in range(2, math.isqrt(q) + 1))


def _next_prime(q: int) -> int:
    while not _is_prime(q):
        q += 1
    return q


def _ceil_root(m: int, e: int) -> int:
    r = max(1, int(round(m ** (1.0 / e))))
    while r**e < m:
        r += 1
    while r > 1 and (r - 1) ** e >= m:
        r -= 1
    return r


def _best_step(m: int, delta: int) -> Optional[tuple[int, int]]:
    """Cheapest (q, D): q prime, q > D*delta, q^(D+1) >= m; minimises q^2."""
    best = None
    D = 1
    while True:
        lo = D * delta + 1
        if best is not None and lo >= best[0]:
            break
        q = _next_prime(max(lo, _ceil_root(m, D + 1), 2))
        if best is None or q < best[0]:
            best = (q, D)
        if 2 ** (D + 1) >= m:
            break
        D += 1
    return best


@lru_cache(maxsize=None)
def linial_schedule(id_bound: int, delta: int) -> tuple[tuple[tuple[int, int], ...], int]:
    """Reduction steps ``(q, D)`` and final palette starting from ``id_bound`` colors.

    One step maps color c to ``x*q + p_c(x) + 1`` where p_c is the degree-D
    polynomial over GF(q) whose coefficients are the base-q digits of c-1,
    and x is the smallest point where p_c differs from every neighbor's
    polynomial. Distinct polynomials agree on at most D points, so q > D*delta
    guarantees such an x. Steps are taken while they shrink the palette.
    """
    steps = []
    m = max(id_bound, 1)
    if delta == 0:
        return (), 1
    while True:
        best = _best_step(m, delta)
        if best is None or best[0] ** 2 >= m:
            break
        steps.append(best)
        m = best[0] ** 2
    return tuple(steps), m


def linial_round_bound(id_bound: int, delta: int) -> int:
    return len(linial_schedule(id_bound, delta)[0])


@lru_cache(maxsize=1 << 18)
def _poly_values(color: int, q: int, D: int) -> tuple[int, ...]:
    c = color - 1
    coeffs = []
    for _ in range(D + 1):
        coeffs.append(c % q)
        c //= q
    vals = []
    for x in range(q):
        acc = 0
        for a in reversed(coeffs):
            acc = (acc * x + a) % q
        vals.append(acc)
    return tuple(vals)


def linial_step(color: int, neighbor_colors: Sequence[int], q: int, D: int) -> int:
    mine = _poly_values(color, q, D)
    bad = set()
    for c in neighbor_colors:
        if c == color:
            raise ColoringError(f"neighbors share color {c}")
        for x, val in enumerate(_poly_values(c, q, D)):
            if val == mine[x]:
                bad.add(x)
    for x in range(q):
        if x not in bad:
            return x * q + mine[x] + 1
    raise AssertionError("no free evaluation point; q too small for the degree")


class LinialAlgorithm(RoundAlgorithm):
    """Iterated polynomial color reduction.

    Node input: ``{"id": int, "id_bound": int}``. Every node derives the
    same schedule from ``id_bound`` and the known max degree.
    """

    def __init__(self, delta: int):
        self.delta = delta

    def init(self, inp: Mapping[str, int], degree: int) -> Any:
        steps, _ = linial_schedule(inp["id_bound"], self.delta)
        color = 1 if self.delta == 0 else inp["id"]
        return (color, steps, degree)

    def step(self, state, inbox, rnd):
        color, steps, deg = state
        if rnd > 0:
            q, D = steps[rnd - 1]
            color = linial_step(color, list(inbox.values()), q, D)
        if rnd == len(steps):
            return (color, steps, deg), {}, color
        return (color, steps, deg), {p: color for p in range(deg)}, None


def linial_palette_bound(delta: int) -> int:
    return LINIAL_K * delta * delta * max(1, math.ceil(math.log2(max(delta, 1)))) + LINIAL_K0


def linial_coloring(g: Graph, ids: Sequence[int], id_bound: Optional[int] = None) -> Coloring:
    if len(set(ids)) != len(ids):
        raise ColoringError("duplicate ids")
    if len(ids) != g.n or (ids and min(ids) < 1):
        raise ColoringError("need one positive id per node")
    if g.n == 0:
        return Coloring((), 1, 0)
    delta = g.max_degree
    bound = id_bound if id_bound is not None else max(max(ids), g.n)
    inputs = [{"id": i, "id_bound": bound} for i in ids]
    report = run_rounds(g, LinialAlgorithm(delta), inputs, max_rounds=linial_round_bound(bound, delta))
    _, palette = linial_schedule(bound, delta)
    colors = tuple(report.outputs)
    if palette > max(linial_palette_bound(delta), bound):
        raise AssertionError(f"Linial palette {palette} above declared bound")
    return Coloring(colors, max(palette, max(colors)), report.rounds_used)


# ---------------------------------------------------------- color reduction

class ReduceAlgorithm(RoundAlgorithm):
    """Drop one color class per round, lowest class above the target first.

    Nodes whose color exceeds ``target`` recolor with the smallest color in
    1..target unused by neighbors; nodes already within the target never move.
    """

    def __init__(self, palette: int, target: int):
        self.palette = palette
        self.target = target

    def init(self, inp, degree):
        return {"color": inp, "deg": degree, "nbr": {}}

    def _when(self, color: int) -> int:
        return color - self.target

    def step(self, state, inbox, rnd):
        state = dict(state, nbr={**state["nbr"], **inbox})
        color = state["color"]
        if rnd == 0:
            out = {p: color for p in range(state["deg"])}
            return state, out, (color if color <= self.target else None)
        if rnd == self._when(color):
            used = set(state["nbr"].values())
            new = next(c for c in range(1, self.target + 1) if c not in used)
            state["color"] = new
            return state, {p: new for p in range(state["deg"])}, new
        return state, {}, None

    def wake_at(self, state, rnd):
        return self._when(state["color"])


def reduce_colors(g: Graph, c0: Coloring, target: int) -> Coloring:
    if target < g.max_degree + 1:
        raise ColoringError(f"target {target} below max degree + 1 = {g.max_degree + 1}")
    _require_proper(g, c0.colors)
    if c0.palette_size <= target:
        return c0
    report = run_rounds(g, ReduceAlgorithm(c0.palette_size, target), list(c0.colors),
                        max_rounds=c0.palette_size)
    # nodes cannot know which classes are empty, so the full schedule is charged
    return Coloring(tuple(report.outputs), target, max(report.rounds_used, c0.palette_size - target))


def proper_target(delta: int) -> int:
    """Palette for the orientation coloring: delta^2, but never below delta + 1."""
    return max(delta * delta, delta + 1)


def compute_proper_coloring(g: Graph, ids: Sequence[int], id_bound: Optional[int] = None) -> Coloring:
    lin = linial_coloring(g, ids, id_bound)
    target = proper_target(g.max_degree)
    if lin.palette_size <= target:
        return lin
    red = reduce_colors(g, lin, target)
    return Coloring(red.colors, red.palette_size, lin.rounds_used + red.rounds_used)


def reduce_to(g: Graph, ids: Sequence[int], target: int) -> Coloring:
    """Linial coloring followed by reduction to exactly ``target`` colors."""
    lin = linial_coloring(g, ids)
    if lin.palette_size <= target:
        return Coloring(lin.colors, target, lin.rounds_used)
    red = reduce_colors(g, lin, target)
    return Coloring(red.colors, red.palette_size, lin.rounds_used + red.rounds_used)


# --------------------------------------------------------------------- MIS

class MISAlgorithm(RoundAlgorithm):
    """Color class i decides in round i; joins unless a neighbor already did."""

    def init(self, inp, degree):
        return (inp, degree, False)

    def step(self, state, inbox, rnd):
        color, deg, blocked = state
        blocked = blocked or bool(inbox)
        if rnd < color:
            return (color, deg, blocked), {}, None
        join = not blocked
        return (color, deg, blocked), ({p: 1 for p in range(deg)} if join else {}), join

    def wake_at(self, state, rnd):
        return state[0]


@dataclass(frozen=True)
class NodeSet:
    members: frozenset[int]
    rounds_used: int = 0

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


def mis_from_coloring(g: Graph, c: Coloring) -> NodeSet:
    _require_proper(g, c.colors)
    report = run_rounds(g, MISAlgorithm(), list(c.colors), max_rounds=c.palette_size)
    return NodeSet(frozenset(v for v, j in enumerate(report.outputs) if j), report.rounds_used)


# -------------------------------------------------------- distance colorings

def distance_k_coloring(g: Graph, k: int, ids: Sequence[int]) -> Coloring:
    """Proper coloring of the k-th power graph, simulated on G.

    Rounds are charged k per power-graph round, since one round on the
    power graph costs k rounds of G.
    """
    if k < 1:
        raise ColoringError("k must be >= 1")
    h = power_graph(g, k) if k > 1 else g
    c = compute_proper_coloring(h, ids)
    d = g.max_degree
    if d >= 2 and c.palette_size > d ** (2 * k):
        raise ColoringError(f"palette {c.palette_size} exceeds d^(2k) = {d ** (2 * k)}")
    return Coloring(c.colors, c.palette_size, k * c.rounds_used)


def complete_distance_coloring(
    g: Graph, k: int, precolored: Sequence[Optional[int]], ids: Sequence[int]
) -> Coloring:
    """Extend a partial distance-k coloring without touching fixed colors.

    Uncolored nodes get a Linial coloring of their part of the power graph,
    shifted above every fixed color, and the shifted classes are then
    reduced down to max(power degree + 1, largest fixed color).
    """
    if len(precolored) != g.n:
        raise ColoringError("precolored must have one entry per node")
    h = power_graph(g, k) if k > 1 else g
    for u, v, _, _ in h.edges():
        cu, cv = precolored[u], precolored[v]
        if cu is not None and cu == cv:
            raise ColoringError(f"precolored nodes {u} and {v} clash at distance <= {k}")
    free = [v for v in range(g.n) if precolored[v] is None]
    fixed_max = max((c for c in precolored if c is not None), default=0)
    if not free:
        return Coloring(tuple(precolored), max(fixed_max, 1), 0)  # type: ignore[arg-type]
    sub = induced_subgraph(h, free)
    lin = linial_coloring(sub, [ids[v] for v in free], id_bound=max(max(ids), g.n))
    colors = list(precolored)
    for i, v in enumerate(free):
        colors[v] = fixed_max + lin.colors[i]
    target = max(h.max_degree + 1, fixed_max)
    start = Coloring(tuple(colors), fixed_max + lin.palette_size)  # type: ignore[arg-type]
    red = reduce_colors(h, start, target) if start.palette_size > target else start
    return Coloring(red.colors, red.palette_size, k * (lin.rounds_used + red.rounds_used))


def induced_subgraph(g: Graph, nodes: Sequence[int]) -> Graph:
    """Subgraph on ``nodes`` (renumbered in the given order) with ``source`` map."""
    index = {v: i for i, v in enumerate(nodes)}
    edges = [(index[u], index[v]) for u in nodes for v, _ in g.adj[u] if v in index and index[u] < index[v]]
    return Graph.from_edges(len(nodes), edges, source=tuple(nodes))
