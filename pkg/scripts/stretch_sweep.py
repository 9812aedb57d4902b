#!/usr/bin/env python3
"""Measured tree stretch and routing sizes of spanning-tree forests; CSV on stdout."""
import argparse
import csv
import sys
from dataclasses import dataclass

from ramsey.forest import build_forest, stretch_bound
from ramsey.generate import FAMILIES, generate
from ramsey.routing import build_network_scheme, measure_scheme


@dataclass
class SweepConfig:
    families: tuple[str, ...] = ("random", "grid", "path")
    sizes: tuple[int, ...] = (64, 256)
    ks: tuple[int, ...] = (1, 2, 3)
    seeds: int = 3
    b: int = 4


def run(cfg: SweepConfig, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["family", "n", "k", "seed", "trees", "max_home_stretch", "bound",
                "max_label_words", "max_tree_entries"])
    for fam in cfg.families:
        for n in cfg.sizes:
            for k in cfg.ks:
                # structured families ignore the seed
                for seed in range(cfg.seeds if fam == "random" else 1):
                    g = generate(fam, n, seed)
                    D = g.all_pairs()
                    f = build_forest(g, k, keep_runs=False)
                    worst = 0.0
                    for v in range(g.n):
                        td = f.trees[f.home[v]].distances_from(v)
                        worst = max([worst] + [td[u] / D[v, u] for u in range(g.n) if u != v])
                    s = measure_scheme(build_network_scheme(g, f, cfg.b)).summary()
                    w.writerow([fam, g.n, k, seed, len(f.trees), f"{worst:.3f}", stretch_bound(g.n, k),
                                s["max_label_words"], s["max_tree_entries"]])


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--families", nargs="+", choices=FAMILIES, default=list(SweepConfig.families))
    p.add_argument("--sizes", type=int, nargs="+", default=list(SweepConfig.sizes))
    p.add_argument("--ks", type=int, nargs="+", default=list(SweepConfig.ks))
    p.add_argument("--seeds", type=int, default=SweepConfig.seeds)
    p.add_argument("--b", type=int, default=SweepConfig.b)
    a = p.parse_args()
    run(SweepConfig(tuple(a.families), tuple(a.sizes), tuple(a.ks), a.seeds, a.b), sys.stdout)


if __name__ == "__main__":
    main()
