"""Ramsey spanning trees: iterate petal decompositions until every vertex has a home."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import WeightedGraph
from .partition import MarkState
from .petal import PetalRun, run_from_root
from .tree import SpanningTree


def l_max(n: int) -> int:
    """``max(1, ceil(1 + log2 log2 n))``."""
    if n <= 2:
        return 1
    return max(1, math.ceil(1 + math.log2(math.log2(n))))


def stretch_bound(n: int, k: int) -> float:
    """Guaranteed tree stretch toward a home vertex: ``2 * 8 * 2**7 * L_max * k``."""
    return 2 * 8 * 2**7 * l_max(n) * k


@dataclass
class ForestCollection:
    k: int
    trees: list[SpanningTree]
    survivors: list[frozenset[int]]
    home: list[int]
    marked: list[frozenset[int]] = field(default_factory=list)  # M_i entering iteration i
    runs: list[PetalRun] = field(default_factory=list, repr=False)

    @property
    def n(self) -> int:
        return len(self.home)


def build_forest(g: WeightedGraph, k: int, keep_runs: bool = True) -> ForestCollection:
    if k < 1:
        raise ValueError("k must be >= 1")
    M = set(range(g.n))
    home = [-1] * g.n
    trees, survivors, marked, runs = [], [], [], []
    while M:
        marked.append(frozenset(M))
        run = run_from_root(g, MarkState(M), k, root=0)
        if not run.survivors:
            raise AssertionError("iteration left no survivor")
        idx = len(trees)
        for v in run.survivors:
            home[v] = idx
        M -= run.survivors
        trees.append(run.tree)
        survivors.append(run.survivors)
        if keep_runs:
            runs.append(run)
    return ForestCollection(k, trees, survivors, home, marked, runs)


def spanner_union(f: ForestCollection) -> list[tuple[int, int]]:
    """Sorted, de-duplicated union of all tree edges."""
    return sorted({e for t in f.trees for e in t.edges})
