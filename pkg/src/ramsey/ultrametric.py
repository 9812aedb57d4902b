"""Labelled rooted trees realising ultrametrics, with constant-time LCA."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .partition import Hierarchy


class StepCounter:
    """Counts elementary table lookups made by queries."""

    def __init__(self):
        self.steps = 0

    def tick(self, n: int = 1) -> None:
        self.steps += n


class LcaIndex:
    """Euler tour plus sparse minimum table: O(n log n) build, O(1) query.

    ``parent[root] == -1``; children are visited in increasing node id.
    """

    def __init__(self, parent: Sequence[int]):
        n = len(parent)
        children: list[list[int]] = [[] for _ in range(n)]
        root = -1
        for v, p in enumerate(parent):
            if p < 0:
                if root >= 0:
                    raise ValueError("more than one root")
                root = v
            else:
                children[p].append(v)
        if root < 0:
            raise ValueError("no root")
        depth = [0] * n
        euler: list[int] = []
        first = [-1] * n
        stack = [(root, 0)]
        while stack:
            v, ci = stack.pop()
            if ci == 0:
                first[v] = len(euler)
            euler.append(v)
            if ci < len(children[v]):
                stack.append((v, ci + 1))
                c = children[v][ci]
                depth[c] = depth[v] + 1
                stack.append((c, 0))
        if min(first) < 0:
            raise ValueError("parent array is not a tree")
        self.root = root
        self.depth = depth
        self.euler = euler
        self.first = first
        m = len(euler)
        log = [0] * (m + 1)
        for x in range(2, m + 1):
            log[x] = log[x >> 1] + 1
        self.log = log
        table = [euler[:]]
        span = 1
        while 2 * span <= m:
            prev = table[-1]
            row = []
            for s in range(m - 2 * span + 1):
                a, b = prev[s], prev[s + span]
                row.append(a if depth[a] <= depth[b] else b)
            table.append(row)
            span *= 2
        self.table = table

    def query(self, u: int, v: int, counter: StepCounter | None = None) -> int:
        lo, hi = self.first[u], self.first[v]
        if lo > hi:
            lo, hi = hi, lo
        j = self.log[hi - lo + 1]
        row = self.table[j]
        a, b = row[lo], row[hi - (1 << j) + 1]
        if counter is not None:
            counter.tick(5)
        return a if self.depth[a] <= self.depth[b] else b


@dataclass
class UltrametricTree:
    parent: list[int]
    label: list[float]
    level: list[int]  # hierarchy level of a cluster node, -1 for a leaf below level 0
    leaf_of: dict[int, int]  # vertex -> node
    cluster: list[tuple[int, int] | None]  # node -> (level, index in level)
    scale: float = 1.0
    _lca: LcaIndex | None = field(default=None, repr=False, compare=False)

    @property
    def lca_index(self) -> LcaIndex:
        if self._lca is None:
            self._lca = LcaIndex(self.parent)
        return self._lca

    def lca(self, u: int, v: int, counter: StepCounter | None = None) -> int:
        """LCA of two tree nodes."""
        return self.lca_index.query(u, v, counter)

    def distance(self, x: int, y: int) -> float:
        """``label(lca(leaf(x), leaf(y)))`` for vertices ``x``, ``y``."""
        if x == y:
            return 0.0
        return self.label[self.lca(self.leaf_of[x], self.leaf_of[y])]

    def __len__(self) -> int:
        return len(self.parent)

    def dump(self) -> str:
        """Parent-array and label-array lines."""
        return (
            "parent " + " ".join(map(str, self.parent)) + "\n"
            + "label " + " ".join(repr(x) for x in self.label) + "\n"
        )


def _cluster_nodes(h: Hierarchy, keep) -> tuple[list[int], list[int], list[tuple[int, int]], dict]:
    """Top-down node numbering of the clusters accepted by ``keep``."""
    parent: list[int] = []
    level: list[int] = []
    cluster: list[tuple[int, int]] = []
    node_of: dict[tuple[int, int], int] = {}
    for i in range(h.phi, -1, -1):
        for ci, c in enumerate(h.levels[i]):
            if not keep(c):
                continue
            node_of[(i, ci)] = len(parent)
            parent.append(-1 if c.parent is None else node_of[(i + 1, c.parent)])
            level.append(i)
            cluster.append((i, ci))
    return parent, level, cluster, node_of


def embed(h: Hierarchy) -> UltrametricTree:
    """Ultrametric on the padded vertices: level-``i`` nodes get ``scale * 2**(i+1) * (1 - 1/(4k))``."""
    padded = h.padded
    parent, level, cluster, node_of = _cluster_nodes(h, lambda c: any(v in padded for v in c.members))
    label = [0.0 if i == 0 else h.scale * 2.0 ** (i + 1) * (1 - 1 / (4 * h.k)) for i in level]
    leaf_of = {}
    for (i, ci), node in node_of.items():
        if i == 0:
            leaf_of[h.levels[0][ci].center] = node
    return UltrametricTree(parent, label, level, leaf_of, list(cluster), h.scale)


def oracle_tree(h: Hierarchy) -> UltrametricTree:
    """Every cluster becomes a node; every vertex a leaf under its lowest cluster.

    Cluster labels are ``scale * 2**(i+1)``, which is exactly the distance
    estimate the oracle returns when that cluster is the LCA.
    """
    parent, level, cluster, node_of = _cluster_nodes(h, lambda c: True)
    label = [h.scale * 2.0 ** (i + 1) for i in level]
    cl: list[tuple[int, int] | None] = list(cluster)
    leaf_of = {}
    lowest = {}
    for i in range(h.phi, -1, -1):
        for ci, c in enumerate(h.levels[i]):
            for v in c.members:
                lowest[v] = node_of[(i, ci)]
    for v in sorted(lowest):
        leaf_of[v] = len(parent)
        parent.append(lowest[v])
        level.append(-1)
        label.append(0.0)
        cl.append(None)
    return UltrametricTree(parent, label, level, leaf_of, cl, h.scale)

