"""Rooted spanning trees of a :class:`WeightedGraph`."""
from __future__ import annotations

from collections import deque
from typing import Iterable

import numpy as np

from .graph import GraphError, WeightedGraph


class SpanningTree:
    """A spanning tree given by graph edges, rooted at ``root``.

    Children are ordered by vertex id; ``parent[root] == -1``.
    """

    def __init__(self, graph: WeightedGraph, root: int, edges: Iterable[tuple[int, int]]):
        n = graph.n
        self.graph = graph
        self.root = root
        self.edges = sorted({(min(u, v), max(u, v)) for u, v in edges})
        if len(self.edges) != n - 1:
            raise GraphError(f"spanning tree needs {n - 1} edges, got {len(self.edges)}")
        self.edge_ids = [graph.edge_index(u, v) for u, v in self.edges]
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        self.adj = adj
        parent = [-2] * n
        parent[root] = -1
        depth = [0] * n
        order = [root]
        dq = deque([root])
        while dq:
            v = dq.popleft()
            for u in adj[v]:
                if parent[u] == -2:
                    parent[u] = v
                    depth[u] = depth[v] + 1
                    order.append(u)
                    dq.append(u)
        if len(order) != n:
            raise GraphError("edges do not span the graph")
        self.parent = parent
        self.depth = depth
        self.order = order  # BFS order, parents before children
        self.children = [[] for _ in range(n)]
        for v in order[1:]:
            self.children[parent[v]].append(v)

    @property
    def n(self) -> int:
        return self.graph.n

    def subtree_sizes(self) -> list[int]:
        size = [1] * self.n
        for v in reversed(self.order[1:]):
            size[self.parent[v]] += size[v]
        return size

    def distances_from(self, v: int, weights: np.ndarray | None = None,
                       members: frozenset[int] | None = None) -> dict[int, float]:
        """Tree distances from ``v`` (original weights unless ``weights`` given),
        optionally restricted to the subtree induced on ``members``."""
        w = self.graph.ew if weights is None else weights
        g = self.graph
        dist = {v: 0.0}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y in dist or (members is not None and y not in members):
                    continue
                dist[y] = dist[x] + float(w[g.edge_index(x, y)])
                stack.append(y)
        return dist

    def path(self, u: int, v: int) -> list[int]:
        """The unique tree path from ``u`` to ``v``."""
        a, b = u, v
        left, right = [a], [b]
        while a != b:
            if self.depth[a] >= self.depth[b]:
                a = self.parent[a]
                left.append(a)
            else:
                b = self.parent[b]
                right.append(b)
        right.pop()  # the meeting vertex is already the last entry of ``left``
        return left + right[::-1]

    def length(self, path: list[int], weights: np.ndarray | None = None) -> float:
        w = self.graph.ew if weights is None else weights
        g = self.graph
        return float(sum(w[g.edge_index(a, b)] for a, b in zip(path, path[1:])))
