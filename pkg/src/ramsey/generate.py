"""Seeded graph families for experiments and tests."""
from __future__ import annotations

import math
import random

from .graph import WeightedGraph

FAMILIES = ("random", "grid", "star", "path")


def generate(family: str, n: int, seed: int = 0, max_weight: int = 100) -> WeightedGraph:
    """A connected graph on ``n`` vertices, byte-identical for a given seed.

    ``random``: a random recursive spanning tree plus extra edges up to about
    ``2n`` edges, integer weights in ``[1, max_weight]``.  ``grid`` (the largest
    ``a x b`` grid with ``a*b == n``, near square), ``star`` (centre 0) and
    ``path`` use unit weights.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if family == "path":
        return WeightedGraph(n, [(v, v + 1, 1) for v in range(n - 1)])
    if family == "star":
        return WeightedGraph(n, [(0, v, 1) for v in range(1, n)])
    if family == "grid":
        a = max(d for d in range(1, math.isqrt(n) + 1) if n % d == 0)
        b = n // a
        edges = []
        for i in range(a):
            for j in range(b):
                v = i * b + j
                if j + 1 < b:
                    edges.append((v, v + 1, 1))
                if i + 1 < a:
                    edges.append((v, v + b, 1))
        return WeightedGraph(n, edges)
    if family == "random":
        rng = random.Random(seed)
        seen: set[tuple[int, int]] = set()
        edges = []
        for v in range(1, n):
            u = rng.randrange(v)
            seen.add((u, v))
            edges.append((u, v, rng.randint(1, max_weight)))
        target = min(2 * n, n * (n - 1) // 2)
        while len(edges) < target:
            u, v = rng.sample(range(n), 2)
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            edges.append((key[0], key[1], rng.randint(1, max_weight)))
        return WeightedGraph(n, edges)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
