"""Batch front-end: ``lcl-lab {gen,run,verify,bench,reduce}``.

Exit codes: 0 success and verified, 1 verification failure, 2 bad
parameters or precondition failure, 3 candidate algorithm disqualified.
Options may also come from ``--config FILE.json``; command-line flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import sim
from .graph import (
    Graph,
    GraphError,
    check_regular_params,
    gen_2colored_regular_tree,
    gen_random_regular,
    gen_regular_tree,
    read_edgelist,
    to_dot,
    write_edgelist,
)
from .partial import Mode, PreconditionError, layered_mis_coloring, two_sweep_coloring
from .reduction import (
    Disqualified,
    MemoizedOracle,
    ReductionError,
    constant_oracle,
    even_radius,
    host_degree,
    run_reduction,
)
from .symmetry import ColoringError, compute_proper_coloring, linial_coloring
from .verify import (
    Policy,
    to_jsonl,
    verify_distance_coloring,
    verify_locally_optimal_cut,
    verify_partial_coloring,
    verify_proper_coloring,
    verify_sinkless,
)

EXIT_OK, EXIT_VERIFY, EXIT_PRECONDITION, EXIT_DISQUALIFIED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dump(doc: Any, path: Optional[str]) -> None:
    text = json.dumps(doc, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_graph(args: argparse.Namespace) -> Graph:
    if getattr(args, "graph", None):
        return read_edgelist(Path(args.graph).read_text())
    if args.n is None or args.d is None:
        raise UsageError("give --graph FILE or -n/-d/--seed")
    check_regular_params(args.n, args.d)
    if args.seed is None:
        raise UsageError("--seed is required for random graphs")
    return gen_random_regular(args.n, args.d, args.seed)


def _ids(g: Graph, args: argparse.Namespace) -> list[int]:
    if getattr(args, "ids", None):
        ids = json.loads(Path(args.ids).read_text())
        if len(ids) != g.n:
            raise UsageError("ids file must list one id per node")
        return ids
    return list(range(1, g.n + 1))


# ------------------------------------------------------------------- gen

def cmd_gen(args: argparse.Namespace) -> int:
    labels = None
    if args.tree or args.two_colored:
        if args.d is None or args.depth is None:
            raise UsageError("trees need -d and --depth")
        if args.two_colored:
            g, labels = gen_2colored_regular_tree(args.d, args.depth)
        else:
            g = gen_regular_tree(args.d, args.depth)
    else:
        if args.n is None or args.d is None:
            raise UsageError("random regular graphs need -n and -d")
        check_regular_params(args.n, args.d)
        if args.seed is None:
            raise UsageError("--seed is required for random graphs")
        g = gen_random_regular(args.n, args.d, args.seed)
    text = write_edgelist(g)
    if args.output:
        Path(args.output).write_text(text)
        if labels is not None:
            Path(args.output + ".labels.json").write_text(json.dumps(list(labels)) + "\n")
    else:
        sys.stdout.write(text)
    if args.dot:
        Path(args.dot).write_text(to_dot(g, labels))
    return EXIT_OK


# ------------------------------------------------------------------- run

def cmd_run(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    ids = _ids(g, args)
    doc: dict[str, Any] = {"algorithm": args.algorithm, "n": g.n}
    if args.algorithm == "two-sweep":
        if args.k is None:
            raise UsageError("two-sweep needs -k")
        res = two_sweep_coloring(g, args.k, Mode(args.mode), ids)
        viol = verify_partial_coloring(g, res.colors, args.k)
        doc.update(
            mode=args.mode,
            k=args.k,
            palette_size=res.palette_size,
            rounds_used=res.rounds_used,
            rounds=res.rounds,
            tags=res.tag_histogram(),
        )
        if args.decisions:
            doc["decisions"] = [d.to_dict() for d in res.decisions]
        colors = res.colors
    elif args.algorithm == "layered-mis":
        if args.c is None:
            raise UsageError("layered-mis needs -c")
        res = layered_mis_coloring(g, args.c, ids)
        viol = verify_partial_coloring(g, res.colors, args.c - 1)
        doc.update(c=args.c, palette_size=res.palette_size, rounds_used=res.rounds_used,
                   layer_sizes=[len(x) for x in res.layers])
        colors = res.colors
    else:
        fn = linial_coloring if args.algorithm == "linial" else compute_proper_coloring
        res = fn(g, ids)
        viol = verify_proper_coloring(g, res.colors)
        doc.update(palette_size=res.palette_size, rounds_used=res.rounds_used)
        colors = res.colors
    doc["coloring"] = list(colors)
    doc["violations"] = len(viol)
    doc["verified"] = not viol
    _dump(doc, args.output)
    if args.dot:
        Path(args.dot).write_text(to_dot(g, colors))
    return EXIT_OK if not viol else EXIT_VERIFY


# ---------------------------------------------------------------- verify

def cmd_verify(args: argparse.Namespace) -> int:
    g = read_edgelist(Path(args.graph).read_text())
    exempt = json.loads(Path(args.exempt).read_text()) if args.exempt else None
    if args.property == "sinkless":
        if not args.orientation:
            raise UsageError("sinkless verification needs --orientation")
        arcs = [tuple(a) for a in json.loads(Path(args.orientation).read_text())]
        viol = verify_sinkless(g, _Arcs(arcs), exempt)
    else:
        if not args.coloring:
            raise UsageError("--coloring is required")
        f = json.loads(Path(args.coloring).read_text())
        if isinstance(f, dict):
            f = f["coloring"]
        if len(f) != g.n:
            raise UsageError("coloring length differs from node count")
        if args.property == "partial":
            if args.k is None:
                raise UsageError("partial verification needs -k")
            viol = verify_partial_coloring(g, f, args.k, Policy(args.policy), exempt or ())
        elif args.property == "proper":
            viol = verify_proper_coloring(g, f)
        elif args.property == "cut":
            viol = verify_locally_optimal_cut(g, f)
        else:
            if args.k is None:
                raise UsageError("distance verification needs -k")
            viol = verify_distance_coloring(g, f, args.k)
    text = to_jsonl(viol)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if not viol else EXIT_VERIFY


class _Arcs:
    def __init__(self, arcs: Sequence[tuple[int, int]]):
        self.arcs = arcs


# ----------------------------------------------------------------- bench

def cmd_bench(args: argparse.Namespace) -> int:
    rows = []
    for d in args.degrees:
        for n in args.sizes:
            for seed in range(args.seeds):
                if n == 1:
                    g = Graph(((),))
                    res = compute_proper_coloring(g, [1])
                    rows.append({"n": 1, "d": 0, "seed": seed, "rounds_used": res.rounds_used})
                    continue
                g = gen_random_regular(n, d, seed)
                if args.algorithm == "two-sweep":
                    res = two_sweep_coloring(g, args.k, Mode(args.mode), list(range(1, n + 1)))
                    ok = not verify_partial_coloring(g, res.colors, args.k)
                else:
                    res = compute_proper_coloring(g, list(range(1, n + 1)))
                    ok = not verify_proper_coloring(g, res.colors)
                rows.append({"n": n, "d": d, "seed": seed, "rounds_used": res.rounds_used,
                             "verified": ok})
    _dump({"algorithm": args.algorithm, "rows": rows}, args.output)
    return EXIT_OK if all(r.get("verified", True) for r in rows) else EXIT_VERIFY


# ---------------------------------------------------------------- reduce

def cmd_reduce(args: argparse.Namespace) -> int:
    d, k = args.d, args.k
    if args.host:
        host = read_edgelist(Path(args.host).read_text())
        labels = json.loads(Path(args.host + ".labels.json").read_text())
    else:
        host, labels = gen_2colored_regular_tree(host_degree(d, even_radius(k)), args.host_depth)
    if args.oracle == "memoized":
        oracle = MemoizedOracle.build(host, labels, d, k, fill=args.fill).view()
    else:
        oracle = constant_oracle(args.oracle.split("-", 1)[1], radius=k)
    try:
        o, report, vg = run_reduction(host, labels, oracle, d, k, fill=args.fill)
    except Disqualified as e:
        _dump({"oracle": args.oracle, "disqualified": True, "reason": str(e)}, args.output)
        return EXIT_DISQUALIFIED
    doc = {"oracle": args.oracle, "disqualified": False, **report.to_dict(),
           "orientation": [list(a) for a in o.arcs]}
    _dump(doc, args.output)
    if args.orientation_out:
        Path(args.orientation_out).write_text(json.dumps([list(a) for a in o.arcs]) + "\n")
    if args.host_out:
        Path(args.host_out).write_text(write_edgelist(host))
    if args.vg_out:
        Path(args.vg_out).write_text(write_edgelist(vg.graph))
        Path(args.vg_out + ".json").write_text(json.dumps(vg.sidecar(), sort_keys=True) + "\n")
    good = report.to_dict()["sinkless"] and report.sound and report.precolored_verbatim
    return EXIT_OK if good else EXIT_VERIFY


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcl-lab", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file of option defaults")
    p.add_argument("--threads", type=int, default=1, help="simulator worker cap")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph in edge-list format")
    kind = g.add_mutually_exclusive_group()
    kind.add_argument("--random-regular", action="store_true")
    kind.add_argument("--tree", action="store_true")
    kind.add_argument("--two-colored", action="store_true", help="2-colored regular tree")
    g.add_argument("-n", type=int)
    g.add_argument("-d", type=int)
    g.add_argument("--depth", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output")
    g.add_argument("--dot")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run an algorithm and verify its output")
    r.add_argument("algorithm", choices=["two-sweep", "layered-mis", "linial", "proper"])
    r.add_argument("--graph")
    r.add_argument("-n", type=int)
    r.add_argument("-d", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--ids")
    r.add_argument("-k", type=int)
    r.add_argument("-c", type=int)
    r.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.THREE_COLOR.value)
    r.add_argument("--decisions", action="store_true", help="include per-node decisions")
    r.add_argument("-o", "--output")
    r.add_argument("--dot")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="check a labeling; prints violations as JSON lines")
    v.add_argument("property", choices=["partial", "proper", "cut", "distance", "sinkless"])
    v.add_argument("--graph", required=True)
    v.add_argument("--coloring")
    v.add_argument("--orientation")
    v.add_argument("-k", type=int)
    v.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.STRICT.value)
    v.add_argument("--exempt", help="JSON list of exempt nodes")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="round counts over sizes and degrees")
    b.add_argument("algorithm", choices=["two-sweep", "proper"])
    b.add_argument("--sizes", type=int, nargs="+", default=[256, 65536])
    b.add_argument("--degrees", type=int, nargs="+", default=[5])
    b.add_argument("--seeds", type=int, default=1)
    b.add_argument("-k", type=int, default=3)
    b.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.THREE_COLOR.value)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)

    x = sub.add_parser("reduce", help="run the gadget reduction to sinkless orientation")
    x.add_argument("--d", type=int, default=3)
    x.add_argument("--k", type=int, default=2)
    x.add_argument("--oracle", choices=["memoized", "constant-white", "constant-black"],
                   default="memoized")
    x.add_argument("--host", help="host edge list (labels in HOST.labels.json)")
    x.add_argument("--host-depth", type=int, default=1)
    x.add_argument("--fill", choices=["distinct", "distance"], default="distinct")
    x.add_argument("-o", "--output")
    x.add_argument("--orientation-out")
    x.add_argument("--host-out")
    x.add_argument("--vg-out")
    x.set_defaults(func=cmd_reduce)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        cfg = json.loads(Path(known.config).read_text())
        for action in parser._subparsers._group_actions:  # type: ignore[union-attr]
            for subp in action.choices.values():
                subp.set_defaults(**cfg)
    args = parser.parse_args(argv)
    sim.DEFAULT_WORKERS = max(1, args.threads)
    try:
        return args.func(args)
    except (UsageError, GraphError, PreconditionError, ColoringError, ReductionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except Disqualified as e:
        print(f"disqualified: {e}", file=sys.stderr)
        return EXIT_DISQUALIFIED


if __name__ == "__main__":
    sys.exit(main())
