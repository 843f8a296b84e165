"""Two-sweep partial colorings at and above the degree thresholds.

Prints one JSON row per (mode, k, d, n): clean runs, violations, tag counts
and mean rounds.
"""

import argparse
import json
from collections import Counter
from dataclasses import asdict, dataclass, field

from lcl_lab import partial
from lcl_lab.graph import gen_random_regular
from lcl_lab.partial import Mode, two_sweep_coloring
from lcl_lab.verify import verify_partial_coloring


@dataclass
class SweepConfig:
    sizes: list[int] = field(default_factory=lambda: [100, 1000])
    seeds: int = 20
    slack: int = 0
    three_color: list[tuple[int, int]] = field(default_factory=lambda: [(3, 5), (4, 8), (5, 11)])
    full_palette: list[tuple[int, int]] = field(default_factory=lambda: [(4, 6), (5, 7), (6, 8)])


def run(cfg: SweepConfig) -> list[dict]:
    rows = []
    plan = [(Mode.THREE_COLOR, kd) for kd in cfg.three_color]
    plan += [(Mode.FULL_PALETTE, kd) for kd in cfg.full_palette]
    for mode, (k, d) in plan:
        d += cfg.slack
        for n in cfg.sizes:
            if (n * d) % 2:
                n += 1
            tags: Counter = Counter()
            clean = violations = rounds = 0
            for seed in range(cfg.seeds):
                g = gen_random_regular(n, d, seed)
                res = two_sweep_coloring(g, k, mode, list(range(1, n + 1)))
                bad = len(verify_partial_coloring(g, res.colors, k))
                clean += bad == 0
                violations += bad
                rounds += res.rounds_used
                tags.update(res.tag_histogram())
            rows.append({
                "mode": mode.value, "k": k, "d": d, "n": n, "runs": cfg.seeds,
                "clean": clean, "violations": violations, "tags": dict(sorted(tags.items())),
                "mean_rounds": rounds / cfg.seeds,
            })
    return rows


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[100, 1000])
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--slack", type=int, default=0, help="add this to every threshold degree")
    a = p.parse_args()
    cfg = SweepConfig(sizes=a.sizes, seeds=a.seeds, slack=a.slack)
    partial.decision_counts.clear()
    for row in run(cfg):
        print(json.dumps(row, sort_keys=True))
    print(json.dumps({"config": asdict(cfg), "decision_counts": dict(partial.decision_counts)},
                     sort_keys=True))


if __name__ == "__main__":
    main()
