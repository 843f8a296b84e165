"""Partial colorings: layered MIS, the two-sweep algorithm, and composition.

Two-sweep outline. A proper coloring with P colors orients every edge
from the smaller color to the larger one; out-neighbors are "above",
in-neighbors "below". The first sweep walks color classes P, P-1, ..., 1
(one per round) and gives each node a tentative color from {1..c-1}: the
one least used by its above-neighbors. The second sweep walks classes
1..P and finalizes: keep the tentative color, take the special color c,
or switch to a non-special color that no below-neighbor currently uses.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping, Optional, Sequence

from .graph import Graph
from .sim import RoundAlgorithm, run_rounds
from .symmetry import (
    Coloring,
    ColoringError,
    compute_proper_coloring,
    induced_subgraph,
    mis_from_coloring,
    reduce_to,
)
from .verify import verify_partial_coloring


class PreconditionError(ValueError):
    pass


class ImpossibleCase(AssertionError):
    """A decision branch the analysis rules out was reached."""


class Mode(str, enum.Enum):
    THREE_COLOR = "three-color"
    FULL_PALETTE = "full-palette"


# tally of second-sweep decisions, for auditing how often each case fires
decision_counts: Counter = Counter()


# ------------------------------------------------------------- orientation

@dataclass(frozen=True)
class Orientation:
    n: int
    arcs: tuple[tuple[int, int], ...]
    level: Optional[tuple[int, ...]] = None
    levels: int = 0

    def up(self, v: int) -> list[int]:
        return self._up[v]

    def down(self, v: int) -> list[int]:
        return self._down[v]

    def __post_init__(self) -> None:
        up: list[list[int]] = [[] for _ in range(self.n)]
        down: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.arcs:
            up[a].append(b)
            down[b].append(a)
        object.__setattr__(self, "_up", up)
        object.__setattr__(self, "_down", down)

    def out_degree(self, v: int) -> int:
        return len(self._up[v])

    def topological_order(self) -> Optional[list[int]]:
        indeg = [len(d) for d in self._down]
        stack = [v for v in range(self.n) if indeg[v] == 0]
        order = []
        while stack:
            v = stack.pop()
            order.append(v)
            for u in self._up[v]:
                indeg[u] -= 1
                if indeg[u] == 0:
                    stack.append(u)
        return order if len(order) == self.n else None

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def longest_path(self) -> int:
        order = self.topological_order()
        if order is None:
            raise ValueError("orientation has a cycle")
        length = [0] * self.n
        for v in order:
            for u in self._up[v]:
                length[u] = max(length[u], length[v] + 1)
        return max(length, default=0)


def acyclic_orientation(g: Graph, c: Coloring) -> Orientation:
    arcs = []
    for u, v, _, _ in g.edges():
        if c[u] == c[v]:
            raise ColoringError(f"coloring not proper at edge {u}-{v}")
        arcs.append((u, v) if c[u] < c[v] else (v, u))
    return Orientation(g.n, tuple(arcs), tuple(c.colors), c.palette_size)


def _port_sides(g: Graph, o: Orientation) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    ups = [set(o.up(v)) for v in range(g.n)]
    up_ports = []
    down_ports = []
    for v in range(g.n):
        up_ports.append(frozenset(p for p, (u, _) in enumerate(g.adj[v]) if u in ups[v]))
        down_ports.append(frozenset(range(g.degree(v))) - up_ports[-1])
    return up_ports, down_ports


# ------------------------------------------------------------- first sweep

@dataclass(frozen=True)
class Tentative:
    color: int
    same: int
    other: int


def least_used(picks: Sequence[int], palette: int) -> int:
    counts = Counter(picks)
    return min(range(1, palette + 1), key=lambda col: (counts[col], col))


class FirstSweep(RoundAlgorithm):
    """Class i decides in round P - i + 1 from its above-neighbors' picks."""

    def __init__(self, levels: int, palette: int):
        self.levels = levels
        self.palette = palette

    def init(self, inp, degree):
        level, up_ports = inp
        return {"level": level, "up": up_ports, "deg": degree, "seen": {}}

    def _when(self, level: int) -> int:
        return self.levels - level + 1

    def step(self, state, inbox, rnd):
        if inbox:
            state = dict(state, seen={**state["seen"], **inbox})
        if rnd != self._when(state["level"]):
            return state, {}, None
        picks = [state["seen"][p] for p in state["up"]]
        color = least_used(picks, self.palette)
        same = sum(1 for x in picks if x == color)
        other = len(picks) - same
        # minority: the least used color holds at most an equal share
        if same * (self.palette - 1) > other:
            raise ImpossibleCase(f"least-used pick {color} is not a minority: {picks}")
        return state, {p: color for p in range(state["deg"])}, Tentative(color, same, other)

    def wake_at(self, state, rnd):
        return self._when(state["level"])


def first_sweep(g: Graph, o: Orientation, palette: int) -> tuple[list[Tentative], int]:
    """Tentative colors in 1..palette; returns them with the rounds used."""
    if o.level is None or not o.is_acyclic():
        raise ValueError("first sweep needs an acyclic orientation built from a coloring")
    if palette < 1:
        raise ValueError("palette must be positive")
    up_ports, _ = _port_sides(g, o)
    inputs = [(o.level[v], up_ports[v]) for v in range(g.n)]
    report = run_rounds(g, FirstSweep(o.levels, palette), inputs, max_rounds=o.levels)
    return report.outputs, report.rounds_used


# ------------------------------------------------------------ decisions

@dataclass(frozen=True)
class Decision:
    """Outcome of the second sweep at one node, with the counters it used.

    t: above-neighbors whose tentative differs from ours; r: those sharing
    it; x / y / z: below-neighbors finalized to our tentative / another
    non-special color / the special color; f: number of free colors.
    """

    tentative: int
    final: int
    tag: str
    t: int
    x: int
    y: int
    z: int
    r: int
    f: int = 0

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def decide_three(a: int, t: int, x: int, y: int, z: int, k: int) -> tuple[str, int]:
    """Second-sweep rule with palette {1, 2} plus special color 3."""
    if t + y + z >= k:
        decision_counts["three:keep"] += 1
        return "KEEP", a
    if x + y >= k:
        decision_counts["three:special"] += 1
        return "SPECIAL", 3
    if y != 0:
        decision_counts["three:impossible"] += 1
        raise ImpossibleCase(f"no rule applies: t={t} x={x} y={y} z={z} k={k}")
    decision_counts["three:switch"] += 1
    return "SWITCH", 3 - a


def decide_full(
    a: int, up_picks: Mapping[int, int], below_finals: Sequence[int], k: int, d: int
) -> tuple[str, int, dict[str, int]]:
    """Second-sweep rule with palette {1..k-1} plus special color k.

    ``up_picks`` maps each tentative color to how many above-neighbors
    picked it; ``below_finals`` lists the below-neighbors' final colors.
    """
    t = sum(cnt for col, cnt in up_picks.items() if col != a)
    r = up_picks.get(a, 0)
    x = sum(1 for col in below_finals if col == a)
    z = sum(1 for col in below_finals if col == k)
    y = len(below_finals) - x - z
    counters = {"t": t, "x": x, "y": y, "z": z, "r": r, "f": 0}
    if t + y + z >= k:
        decision_counts["full:keep"] += 1
        return "KEEP", a, counters
    if x + y >= k:
        decision_counts["full:special"] += 1
        return "SPECIAL", k, counters
    used = set(below_finals)
    free = [g for g in range(1, k) if g != a and g not in used]
    counters["f"] = len(free)
    ok = [g for g in free if up_picks.get(g, 0) <= d - k]
    if not ok:
        decision_counts["full:impossible"] += 1
        raise ImpossibleCase(f"no qualifying free color: counters={counters} picks={dict(up_picks)}")
    decision_counts["full:switch"] += 1
    return "SWITCH", min(ok, key=lambda g: (up_picks.get(g, 0), g)), counters


# ------------------------------------------------------------ second sweep

class SecondSweep(RoundAlgorithm):
    """Class i finalizes in round i from its below-neighbors' final colors."""

    def __init__(self, mode: Mode, k: int):
        self.mode = mode
        self.k = k

    def init(self, inp, degree):
        level, down_ports, tentative, up_tentatives = inp
        return {
            "level": level,
            "down": down_ports,
            "tent": tentative,
            "up_tent": up_tentatives,
            "deg": degree,
            "seen": {},
        }

    def step(self, state, inbox, rnd):
        if inbox:
            state = dict(state, seen={**state["seen"], **inbox})
        if rnd != state["level"]:
            return state, {}, None
        a = state["tent"]
        finals = [state["seen"][p] for p in sorted(state["down"])]
        picks = Counter(state["up_tent"])
        if self.mode is Mode.THREE_COLOR:
            t = sum(cnt for col, cnt in picks.items() if col != a)
            x = finals.count(a)
            z = finals.count(3)
            y = len(finals) - x - z
            tag, final = decide_three(a, t, x, y, z, self.k)
            dec = Decision(a, final, tag, t, x, y, z, picks.get(a, 0))
        else:
            tag, final, cnt = decide_full(a, picks, finals, self.k, state["deg"])
            dec = Decision(a, final, tag, **cnt)
        return state, {p: final for p in range(state["deg"])}, dec

    def wake_at(self, state, rnd):
        return state["level"]


def second_sweep(
    g: Graph, o: Orientation, tentative: Sequence[Tentative | int], k: int, mode: Mode
) -> tuple[list[Decision], int]:
    mode = Mode(mode)
    tent = [t.color if isinstance(t, Tentative) else t for t in tentative]
    if o.level is None:
        raise ValueError("second sweep needs an orientation built from a coloring")
    up_ports, down_ports = _port_sides(g, o)
    inputs = []
    for v in range(g.n):
        up_tents = tuple(tent[g.adj[v][p][0]] for p in sorted(up_ports[v]))
        inputs.append((o.level[v], down_ports[v], tent[v], up_tents))
    report = run_rounds(g, SecondSweep(mode, k), inputs, max_rounds=o.levels)
    return report.outputs, report.rounds_used


def _regular_degree(g: Graph) -> int:
    d = g.regular_degree()
    if d is None:
        raise PreconditionError("two-sweep coloring needs a regular graph")
    return d


def check_preconditions(mode: Mode, k: int, d: int) -> None:
    mode = Mode(mode)
    if mode is Mode.THREE_COLOR:
        if k < 3 or d < 3 * k - 4:
            raise PreconditionError(f"three-color mode needs k >= 3 and d >= 3k-4 (k={k}, d={d})")
    elif k < 4 or d < k + 2:
        raise PreconditionError(f"full-palette mode needs k >= 4 and d >= k+2 (k={k}, d={d})")


def second_sweep_three(g: Graph, o: Orientation, tentative: Sequence[Tentative | int], k: int) -> Coloring:
    check_preconditions(Mode.THREE_COLOR, k, _regular_degree(g))
    decs, rounds = second_sweep(g, o, tentative, k, Mode.THREE_COLOR)
    return SweepColoring(tuple(d.final for d in decs), 3, rounds, decisions=tuple(decs))


def second_sweep_full(g: Graph, o: Orientation, tentative: Sequence[Tentative | int], k: int) -> Coloring:
    check_preconditions(Mode.FULL_PALETTE, k, _regular_degree(g))
    decs, rounds = second_sweep(g, o, tentative, k, Mode.FULL_PALETTE)
    return SweepColoring(tuple(d.final for d in decs), k, rounds, decisions=tuple(decs))


@dataclass(frozen=True)
class SweepColoring(Coloring):
    decisions: tuple[Decision, ...] = ()
    initial: Optional[Coloring] = field(default=None, compare=False)
    rounds: dict[str, int] = field(default_factory=dict, compare=False)

    def tag_histogram(self) -> dict[str, int]:
        return dict(sorted(Counter(d.tag for d in self.decisions).items()))


def two_sweep_coloring(
    g: Graph, k: int, mode: Mode | str, ids: Sequence[int], id_bound: Optional[int] = None
) -> SweepColoring:
    mode = Mode(mode)
    d = _regular_degree(g)
    check_preconditions(mode, k, d)
    c = 3 if mode is Mode.THREE_COLOR else k
    initial = compute_proper_coloring(g, ids, id_bound)
    o = acyclic_orientation(g, initial)
    tent, r1 = first_sweep(g, o, c - 1)
    decs, r2 = second_sweep(g, o, tent, k, mode)
    rounds = {"coloring": initial.rounds_used, "first_sweep": r1, "second_sweep": r2}
    return SweepColoring(
        tuple(dc.final for dc in decs),
        c,
        sum(rounds.values()),
        decisions=tuple(decs),
        initial=initial,
        rounds=rounds,
    )


def sweep_safety_violations(g: Graph, o: Orientation, decisions: Sequence[Decision]) -> list[int]:
    """Nodes whose protected color was later taken by an above-neighbor.

    A KEEP or SWITCH node counts on every above-neighbor whose tentative
    differs from its final color to end on some other color.
    """
    bad = []
    for v, dec in enumerate(decisions):
        if dec.tag == "SPECIAL":
            continue
        for u in o.up(v):
            du = decisions[u]
            if du.tentative != dec.final and du.final == dec.final:
                bad.append(v)
                break
    return bad


# ---------------------------------------------------------- layered MIS

@dataclass(frozen=True)
class LayeredColoring(Coloring):
    layers: tuple[frozenset[int], ...] = ()


def layered_mis_coloring(g: Graph, c: int, ids: Sequence[int]) -> LayeredColoring:
    """(c-1)-partial c-coloring: peel c-1 maximal independent sets, rest gets c."""
    if c < 2:
        raise PreconditionError("need c >= 2")
    if g.n and g.min_degree < c - 1:
        raise PreconditionError(f"min degree {g.min_degree} < c-1 = {c - 1}")
    base = compute_proper_coloring(g, ids)
    rounds = base.rounds_used
    colors = [c] * g.n
    remaining = list(range(g.n))
    layers = []
    for i in range(1, c):
        sub = induced_subgraph(g, remaining)
        sub_col = Coloring(tuple(base[v] for v in remaining), base.palette_size)
        mis = mis_from_coloring(sub, sub_col)
        rounds += mis.rounds_used
        layer = frozenset(remaining[j] for j in mis.members)
        layers.append(layer)
        for v in layer:
            colors[v] = i
        remaining = [v for v in remaining if v not in layer]
    return LayeredColoring(tuple(colors), c, rounds, layers=tuple(layers))


# ------------------------------------------------------------ composition

def compose_proper_coloring(
    g: Graph, pc: Sequence[int], k: int, c: int, ids: Sequence[int]
) -> Coloring:
    """Proper coloring from a k-partial c-coloring of a d-regular graph.

    Each color class induces max degree at most x = d - k and is colored
    with x + 1 colors; the pair (class, inner color) is flattened to
    (class - 1) * (x + 1) + inner, so at most c * (d - k + 1) colors.
    """
    d = _regular_degree(g)
    if k * c < (c - 1) * d + c:
        raise PreconditionError(f"need k >= (c-1)d/c + 1 (k={k}, c={c}, d={d})")
    colors = list(pc)
    if any(not 1 <= col <= c for col in colors):
        raise PreconditionError(f"input colors must lie in 1..{c}")
    if verify_partial_coloring(g, colors, k):
        raise PreconditionError(f"input is not a {k}-partial {c}-coloring")
    x = d - k
    out = [0] * g.n
    rounds = 0
    for cls in range(1, c + 1):
        members = [v for v in range(g.n) if colors[v] == cls]
        if not members:
            continue
        sub = induced_subgraph(g, members)
        inner = reduce_to(sub, [ids[v] for v in members], x + 1)
        rounds = max(rounds, inner.rounds_used)
        for i, v in enumerate(members):
            out[v] = (cls - 1) * (x + 1) + inner[i]
    return Coloring(tuple(out), c * (x + 1), rounds)
