"""Gadget reduction on a small host tree with a memoized and a constant oracle."""

import argparse
import json
from dataclasses import dataclass

from lcl_lab.graph import gen_2colored_regular_tree
from lcl_lab.reduction import (
    WHITE,
    Disqualified,
    MemoizedOracle,
    constant_oracle,
    even_radius,
    host_degree,
    run_reduction,
)


@dataclass
class DemoConfig:
    d: int = 3
    k: int = 2
    host_depth: int = 1


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--host-depth", type=int, default=1)
    a = p.parse_args()
    cfg = DemoConfig(a.d, a.k, a.host_depth)
    host, labels = gen_2colored_regular_tree(host_degree(cfg.d, even_radius(cfg.k)), cfg.host_depth)
    f = MemoizedOracle.build(host, labels, cfg.d, cfg.k).view()
    o, report, vg = run_reduction(host, labels, f, cfg.d, cfg.k)
    doc = report.to_dict()
    doc.update(oracle="memoized", host_nodes=host.n, virtual_nodes=vg.graph.n)
    print(json.dumps(doc, sort_keys=True))
    try:
        run_reduction(host, labels, constant_oracle(WHITE, cfg.k), cfg.d, cfg.k)
        print(json.dumps({"oracle": "constant-white", "disqualified": False}))
    except Disqualified as e:
        print(json.dumps({"oracle": "constant-white", "disqualified": True, "reason": str(e)}))


if __name__ == "__main__":
    main()
