"""Synchronous LOCAL-model engine.

Step numbering: step 0 is local computation before any communication;
messages sent during step r are read during step r+1. A T-round algorithm
therefore produces its outputs by step T. ``rounds_used`` is the last step
in which some node sent a message, changed state, or produced its output.

Nodes sleep between wake-ups: a node is stepped when it has mail or when
``RoundAlgorithm.wake_at`` asked for the current step. Sleeping is only an
optimisation for schedule-driven algorithms; the default wakes every step.
"""

from __future__ import annotations

import heapq
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional, Sequence

from .graph import Ball, Graph, GraphError, ball, bfs_distances, diameter, power_graph

# worker cap used when a caller does not pass ``workers`` (set by the CLI)
DEFAULT_WORKERS = 1

Inbox = Mapping[int, Any]
Outbox = Mapping[int, Any]


class RoundBudgetExceeded(RuntimeError):
    def __init__(self, nodes: Sequence[int], max_rounds: int):
        self.nodes = list(nodes)
        super().__init__(
            f"{len(self.nodes)} node(s) without output after {max_rounds} rounds, "
            f"e.g. {self.nodes[:10]}"
        )


class InvalidDistanceColoring(ValueError):
    def __init__(self, u: int, v: int, k: int):
        self.pair = (u, v)
        super().__init__(f"nodes {u} and {v} share a color within distance {k}")


class RoundAlgorithm:
    """Base class for message-passing algorithms.

    ``step`` returns ``(state, outbox, output)``; a non-None output halts
    the node. Subclasses must be pure in ``(state, inbox, rnd)``.
    """

    def init(self, inp: Any, degree: int) -> Any:
        raise NotImplementedError

    def step(self, state: Any, inbox: Inbox, rnd: int) -> tuple[Any, Outbox, Any]:
        raise NotImplementedError

    def wake_at(self, state: Any, rnd: int) -> Optional[int]:
        return rnd + 1


@dataclass
class ExecutionReport:
    outputs: list[Any]
    rounds_used: int
    trace: Optional[list[dict[str, int]]] = None

    def to_json(self) -> str:
        doc: dict[str, Any] = {"rounds_used": self.rounds_used, "outputs": self.outputs}
        if self.trace is not None:
            doc["trace"] = self.trace
        return json.dumps(doc, sort_keys=True, default=_jsonable)


def _jsonable(obj: Any) -> Any:
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def run_rounds(
    g: Graph | Ball,
    algo: RoundAlgorithm,
    inputs: Sequence[Any],
    max_rounds: int,
    *,
    trace: bool = False,
    workers: Optional[int] = None,
) -> ExecutionReport:
    if len(inputs) != g.n:
        raise ValueError(f"need {g.n} inputs, got {len(inputs)}")
    workers = DEFAULT_WORKERS if workers is None else workers
    outputs, rounds, tr = _execute(g, algo, inputs, max_rounds, trace, workers)
    missing = [v for v, o in enumerate(outputs) if o is None]
    if missing:
        raise RoundBudgetExceeded(missing, max_rounds)
    return ExecutionReport(outputs, rounds, tr)


def _execute(
    g: Graph | Ball,
    algo: RoundAlgorithm,
    inputs: Sequence[Any],
    max_rounds: int,
    want_trace: bool,
    workers: int,
    watch: Optional[int] = None,
) -> tuple[list[Any], int, Optional[list[dict[str, int]]]]:
    n = g.n
    adj = g.adj
    states = [algo.init(inputs[v], len(adj[v])) for v in range(n)]
    outputs: list[Any] = [None] * n
    wakes: list[tuple[int, int]] = []
    next_wake: dict[int, int] = {}
    mail: dict[int, dict[int, Any]] = {}
    rounds_used = 0
    trace: Optional[list[dict[str, int]]] = [] if want_trace else None
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    woken = list(range(n))
    rnd = 0
    try:
        while rnd <= max_rounds:
            inboxes = mail
            mail = {}
            active = sorted(v for v in set(woken) | inboxes.keys() if outputs[v] is None)
            if not active and not next_wake:
                break

            def run(v: int) -> tuple[Any, Outbox, Any]:
                return algo.step(states[v], inboxes.get(v, {}), rnd)

            results = list(pool.map(run, active)) if pool else [run(v) for v in active]
            busy = False
            sent = 0
            for v, (st, outbox, out) in zip(active, results):
                if out is not None or outbox or st != states[v]:
                    busy = True
                states[v] = st
                for p, msg in outbox.items():
                    target = adj[v][p]
                    if target is None:
                        continue
                    u, bp = target
                    mail.setdefault(u, {})[bp] = msg
                    sent += 1
                if out is not None:
                    outputs[v] = out
                else:
                    w = algo.wake_at(st, rnd)
                    if w is not None:
                        w = max(w, rnd + 1)
                        next_wake[v] = w
                        heapq.heappush(wakes, (w, v))
                    else:
                        next_wake.pop(v, None)
            if busy:
                rounds_used = rnd
            if trace is not None:
                trace.append({"round": rnd, "active": len(active), "messages": sent})
            if watch is not None and outputs[watch] is not None:
                break
            rnd += 1
            woken = []
            while wakes and wakes[0][0] <= rnd:
                w, v = heapq.heappop(wakes)
                if next_wake.get(v) == w:
                    woken.append(v)
            if all(o is not None for o in outputs):
                break
    finally:
        if pool:
            pool.shutdown()
    return outputs, rounds_used, trace


# ------------------------------------------------------------------- views

@dataclass(frozen=True)
class ViewFunction:
    """Deterministic map from a radius-``radius`` ball to an output."""

    radius: int
    fn: Callable[[Ball], Any]
    name: str = field(default="view", compare=False)

    def __call__(self, b: Ball) -> Any:
        return self.fn(b)


def run_view_based(g: Graph, f: ViewFunction, labels: Sequence[Any]) -> list[Any]:
    return [f(ball(g, v, f.radius, labels)) for v in range(g.n)]


class FloodView(RoundAlgorithm):
    """View function executed by flooding the ball for ``radius`` rounds.

    Labels serve as names while gathering, so they must be distinct inside
    every radius-``radius`` ball (ids or a distance coloring).
    """

    def __init__(self, f: ViewFunction):
        self.f = f

    def init(self, inp: Any, degree: int) -> Any:
        return {"label": inp, "deg": degree, "ports": [None] * degree, "known": {}}

    def step(self, state: Any, inbox: Inbox, rnd: int) -> tuple[Any, Outbox, Any]:
        r = self.f.radius
        state = dict(state, known=dict(state["known"]))
        if rnd == 0:
            if r == 0:
                return state, {}, self.f(Ball(0, (0,), (0,), ((None,) * state["deg"],), (state["label"],)))
            return state, {p: ("hello", state["label"], p, state["deg"]) for p in range(state["deg"])}, None
        if rnd == 1:
            ports = list(state["ports"])
            for q, (_, lab, p, deg) in inbox.items():
                ports[q] = (lab, p, deg)
            state["ports"] = ports
            state["known"][state["label"]] = (state["deg"], tuple(ports))
        else:
            for _, recs in inbox.items():
                state["known"].update(recs)
        if rnd == r:
            return state, {}, self.f(self._assemble(state))
        return state, {p: dict(state["known"]) for p in range(state["deg"])}, None

    def _assemble(self, state: Any) -> Ball:
        r = self.f.radius
        known = state["known"]
        local = {state["label"]: 0}
        order = [state["label"]]
        dist = [0]
        degs = [state["deg"]]
        i = 0
        while i < len(order):
            lab = order[i]
            if dist[i] < r:
                _, ports = known[lab]
                for rec in ports:
                    if rec is not None and rec[0] not in local:
                        local[rec[0]] = len(order)
                        order.append(rec[0])
                        dist.append(dist[i] + 1)
                        degs.append(rec[2])
            i += 1
        adj = []
        for idx, lab in enumerate(order):
            if dist[idx] < r:
                row = tuple(
                    (local[rec[0]], rec[1]) if rec is not None else None
                    for rec in known[lab][1]
                )
            else:
                row_l: list = [None] * degs[idx]
                # boundary node: only edges back to inner nodes are visible
                for j, inner in enumerate(order):
                    if dist[j] < r:
                        for p, rec in enumerate(known[inner][1]):
                            if rec is not None and rec[0] == lab:
                                row_l[rec[1]] = (j, p)
                row = tuple(row_l)
            adj.append(row)
        return Ball(r, tuple(range(len(order))), tuple(dist), tuple(adj), tuple(order))


def view_to_rounds(f: ViewFunction) -> RoundAlgorithm:
    return FloodView(f)


def rounds_to_view(algo: RoundAlgorithm, t: int, inputs_of: Callable[[Any], Any]) -> ViewFunction:
    """Simulate ``algo`` (finishing within ``t`` rounds) on a radius-t ball.

    ``inputs_of`` turns a ball label into the node input for ``algo``.
    """

    def fn(b: Ball) -> Any:
        outs, _, _ = _execute(b, algo, [inputs_of(lab) for lab in b.labels], t, False, 1, watch=0)
        if outs[0] is None:
            raise RoundBudgetExceeded([b.center], t)
        return outs[0]

    return ViewFunction(t, fn, name="simulated")


# -------------------------------------------------------------- DC-LOCAL

SEARCH_CAP = 10**12


def choose_N(
    f_bound: Callable[[int], int], delta: int, r: int, cap: int = SEARCH_CAP
) -> tuple[int, int]:
    """Smallest N with t = f(N) + 1 and delta^(2(t+r)) < N.

    Scans by jumping: for the current N the threshold delta^(2(t+r)) is
    computed, and if N is too small the scan resumes just above it; since f
    is nondecreasing no skipped N can qualify.
    """
    N = 1
    while N <= cap:
        t = f_bound(N) + 1
        need = delta ** (2 * (t + r))
        if need < N:
            return N, t
        N = max(N + 1, need + 1)
    raise ValueError(f"no N below search cap {cap}")


@dataclass(frozen=True)
class DCInput:
    k: int
    c: int
    coloring: tuple[int, ...]


def check_distance_coloring(g: Graph, colors: Sequence[int], k: int) -> None:
    for v in range(g.n):
        for u in bfs_distances(g, v, k):
            if u != v and colors[u] == colors[v]:
                raise InvalidDistanceColoring(min(u, v), max(u, v), k)


def dc_local_run(
    g: Graph,
    algo: RoundAlgorithm,
    dc: DCInput,
    r: int,
    N: int,
    t: int,
    *,
    brute_force: Optional[Callable[[Graph, Sequence[int]], Sequence[Any]]] = None,
    make_input: Optional[Callable[[int, int], Any]] = None,
) -> list[Any]:
    """Run an id-based algorithm with distance-coloring colors as identifiers.

    Each node gathers its t-ball, renames nodes by their colors, and
    simulates ``algo`` there while claiming the graph has N nodes.
    ``make_input(color, N)`` builds the per-node input (default: a dict
    with ``id`` and ``id_bound``).
    """
    if dc.k != t + r:
        raise ValueError(f"distance parameter must be t + r = {t + r}, got {dc.k}")
    if len(dc.coloring) != g.n:
        raise ValueError("coloring must cover every node")
    if max(dc.coloring, default=0) > dc.c or min(dc.coloring, default=1) < 1:
        raise ValueError(f"colors outside 1..{dc.c}")
    check_distance_coloring(g, dc.coloring, dc.k)
    if diameter(g) < 2 * t:
        if brute_force is None:
            raise GraphError("diameter below 2t and no brute-force solver supplied")
        return list(brute_force(g, dc.coloring))
    mk = make_input or (lambda color, bound: {"id": color, "id_bound": bound})
    view = rounds_to_view(algo, t, lambda color: mk(color, N))
    return run_view_based(g, view, dc.coloring)


def dc_palette_bound(delta: int, t: int, r: int) -> int:
    return delta ** (2 * (t + r))


def log_star(x: float) -> int:
    k = 0
    while x > 1:
        x = math.log2(x)
        k += 1
    return k


__all__ = [
    "DCInput",
    "ExecutionReport",
    "FloodView",
    "InvalidDistanceColoring",
    "RoundAlgorithm",
    "RoundBudgetExceeded",
    "ViewFunction",
    "check_distance_coloring",
    "choose_N",
    "dc_local_run",
    "dc_palette_bound",
    "log_star",
    "power_graph",
    "rounds_to_view",
    "run_rounds",
    "run_view_based",
    "view_to_rounds",
]
