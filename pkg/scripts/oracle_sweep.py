#!/usr/bin/env python3
"""Sweep distance-oracle variants over seeded random graphs; CSV on stdout."""
import argparse
import csv
import sys
import time
from dataclasses import dataclass

from ramsey.generate import generate
from ramsey.oracle import build, build_epsilon, query, query_epsilon


@dataclass
class SweepConfig:
    sizes: tuple[int, ...] = (32, 64, 128)
    ks: tuple[int, ...] = (2, 3)
    seeds: int = 5
    eps: float = 0.5


def run(cfg: SweepConfig, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "k", "seed", "variant", "collections", "size", "max_stretch", "mean_stretch", "build_s"])
    for n in cfg.sizes:
        for k in cfg.ks:
            for seed in range(cfg.seeds):
                g = generate("random", n, seed)
                D = g.all_pairs()
                for variant in ("basic", "reduced", "eps"):
                    t0 = time.perf_counter()
                    if variant == "eps":
                        o = build_epsilon(g, k, cfg.eps)
                        est, count = (lambda s, t: query_epsilon(o, s, t)), sum(len(c.trees) for c in o.copies)
                        size = sum(c.size() for c in o.copies)
                    else:
                        o = build(g, k, variant)
                        est, count, size = (lambda s, t: query(o, s, t)), len(o.trees), o.size()
                    dt = time.perf_counter() - t0
                    ratios = [est(s, t) / D[s, t] for s in range(n) for t in range(n) if s != t]
                    w.writerow([n, k, seed, variant, count, size, f"{max(ratios):.4f}",
                                f"{sum(ratios) / len(ratios):.4f}", f"{dt:.3f}"])


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=list(SweepConfig.sizes))
    p.add_argument("--ks", type=int, nargs="+", default=list(SweepConfig.ks))
    p.add_argument("--seeds", type=int, default=SweepConfig.seeds)
    p.add_argument("--eps", type=float, default=SweepConfig.eps)
    a = p.parse_args()
    run(SweepConfig(tuple(a.sizes), tuple(a.ks), a.seeds, a.eps), sys.stdout)


if __name__ == "__main__":
    main()
