"""Rounds used by the two-sweep algorithm as n grows, and as d grows at fixed n."""

import argparse
import json
from dataclasses import dataclass, field

from lcl_lab.graph import gen_random_regular
from lcl_lab.partial import Mode, two_sweep_coloring
from lcl_lab.sim import log_star


@dataclass
class ScalingConfig:
    k: int = 3
    d: int = 5
    exponents: list[int] = field(default_factory=lambda: [8, 10, 12, 14, 16])
    seeds: int = 3
    degrees: list[int] = field(default_factory=lambda: [5, 8, 11])
    fixed_n: int = 2000


def by_size(cfg: ScalingConfig) -> list[dict]:
    rows = []
    for e in cfg.exponents:
        n = 2**e
        for seed in range(cfg.seeds):
            g = gen_random_regular(n, cfg.d, seed)
            res = two_sweep_coloring(g, cfg.k, Mode.THREE_COLOR, list(range(1, n + 1)))
            rows.append({"n": n, "log_star_n": log_star(n), "seed": seed,
                         "rounds_used": res.rounds_used, **res.rounds})
    return rows


def by_degree(cfg: ScalingConfig) -> list[dict]:
    rows = []
    for d in cfg.degrees:
        g = gen_random_regular(cfg.fixed_n, d, 0)
        res = two_sweep_coloring(g, cfg.k, Mode.THREE_COLOR, list(range(1, cfg.fixed_n + 1)))
        rows.append({"d": d, "d_squared": d * d, "rounds_used": res.rounds_used, **res.rounds})
    return rows


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--exponents", type=int, nargs="+", default=[8, 10, 12, 14, 16])
    p.add_argument("--seeds", type=int, default=3)
    a = p.parse_args()
    cfg = ScalingConfig(exponents=a.exponents, seeds=a.seeds)
    for row in by_size(cfg) + by_degree(cfg):
        print(json.dumps(row, sort_keys=True))


if __name__ == "__main__":
    main()
