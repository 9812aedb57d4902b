"""Weighted undirected graphs, induced-subgraph views and exact shortest paths.

Distances are always measured inside an induced subgraph ``G[Y]`` under the
*working* weights of a view.  Working weights start equal to the graph weights
and may be halved (at most once per edge) by the petal decomposition.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

INF = math.inf


class GraphError(ValueError):
    """Base class for malformed graph input."""


class InvalidWeight(GraphError):
    pass


class Disconnected(GraphError):
    pass


class MalformedEdge(GraphError):
    pass


class NotInView(GraphError):
    pass


class WeightedGraph:
    """Immutable undirected weighted graph on vertices ``0..n-1``.

    ``names`` records the external id of every vertex (input ids for loaded
    graphs, parent-graph ids for a metric closure).  ``metric`` is set when the
    graph is complete and its weights already satisfy the triangle inequality,
    so induced distances equal edge weights.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, float]],
        names: Sequence[int] | None = None,
        *,
        metric: bool = False,
        check_connected: bool = True,
    ):
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        canon: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedEdge(f"edge ({u}, {v}) out of range")
            if u == v:
                raise MalformedEdge(f"self-loop at {u}")
            if not math.isfinite(w) or w < 1:
                raise InvalidWeight(f"edge ({u}, {v}) has weight {w}; weights must be >= 1")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise MalformedEdge(f"duplicate edge {key}")
            canon[key] = w
        keys = sorted(canon)
        self.n = n
        self.names: tuple[int, ...] = tuple(range(n)) if names is None else tuple(int(x) for x in names)
        if len(self.names) != n:
            raise GraphError("names must have one entry per vertex")
        self.metric = metric
        self.eu = np.array([a for a, _ in keys], dtype=np.int64)
        self.ev = np.array([b for _, b in keys], dtype=np.int64)
        self.ew = np.array([canon[e] for e in keys], dtype=np.float64)
        self._eid = {e: i for i, e in enumerate(keys)}
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for i, (a, b) in enumerate(keys):
            adj[a].append((b, i))
            adj[b].append((a, i))
        for lst in adj:
            lst.sort()
        self.adj = adj
        self._port = [{u: p for p, (u, _) in enumerate(lst)} for lst in adj]
        self._apsp: np.ndarray | None = None
        if check_connected and n > 1:
            ncomp, _ = connected_components(self._csr(self.ew), directed=False)
            if ncomp != 1:
                raise Disconnected(f"graph has {ncomp} connected components")

    @property
    def m(self) -> int:
        return len(self.ew)

    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(a), int(b), float(w)) for a, b, w in zip(self.eu, self.ev, self.ew)]

    def edge_index(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self._eid[key]
        except KeyError:
            raise MalformedEdge(f"no edge between {u} and {v}") from None

    def weight(self, u: int, v: int) -> float:
        return float(self.ew[self.edge_index(u, v)])

    def neighbors(self, v: int) -> list[int]:
        return [u for u, _ in self.adj[v]]

    def port(self, v: int, u: int) -> int:
        """Index of the edge ``{v, u}`` in ``v``'s id-sorted adjacency list."""
        return self._port[v][u]

    def via_port(self, v: int, port: int) -> int:
        return self.adj[v][port][0]

    def _csr(self, weights: np.ndarray) -> csr_matrix:
        return csr_matrix((weights, (self.eu, self.ev)), shape=(self.n, self.n))

    def all_pairs(self) -> np.ndarray:
        """Exact all-pairs distance matrix (cached; the graph is immutable)."""
        if self._apsp is None:
            if self.metric:
                d = np.zeros((self.n, self.n))
                d[self.eu, self.ev] = self.ew
                d[self.ev, self.eu] = self.ew
            else:
                d = _csgraph_dijkstra(self._csr(self.ew), directed=False)
            d.setflags(write=False)
            self._apsp = d
        return self._apsp

    def to_text(self) -> str:
        lines = [f"{self.names[a]} {self.names[b]} {_fmt(w)}" for a, b, w in self.edges()]
        if self.n == 1:
            lines = [str(self.names[0])]
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


def _fmt(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def format_distance(x: float) -> str:
    """Decimal rendering with 17 significant digits."""
    if math.isinf(x):
        return "inf"
    return f"{x:.17g}"


def load_graph(text: str) -> WeightedGraph:
    """Parse an edge-list document of ``u v w`` lines.

    Ids are compacted to ``0..n-1`` in order of first appearance.  A line with
    a single id declares a vertex (needed for the one-vertex graph).
    """
    ids: dict[int, int] = {}
    raw: list[tuple[int, int, float]] = []

    def vid(tok: str, lineno: int) -> int:
        try:
            x = int(tok)
        except ValueError:
            raise MalformedEdge(f"line {lineno}: bad vertex id {tok!r}") from None
        return ids.setdefault(x, len(ids))

    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 1:
            vid(parts[0], lineno)
            continue
        if len(parts) != 3:
            raise MalformedEdge(f"line {lineno}: expected 'u v w', got {line!r}")
        u, v = vid(parts[0], lineno), vid(parts[1], lineno)
        try:
            w = float(parts[2])
        except ValueError:
            raise InvalidWeight(f"line {lineno}: bad weight {parts[2]!r}") from None
        raw.append((u, v, w))
    if not ids:
        raise GraphError("empty graph document")
    names = sorted(ids, key=ids.__getitem__)
    return WeightedGraph(len(ids), raw, names)


class WeightOverlay:
    """Working edge weights shared by all views of one decomposition run."""

    def __init__(self, graph: WeightedGraph):
        self.graph = graph
        self.w = graph.ew.copy()
        self.halved: list[int] = []
        self.version = 0

    def halve(self, e: int) -> None:
        if self.w[e] != self.graph.ew[e]:
            raise AssertionError(f"edge {e} halved twice")
        self.w[e] = self.graph.ew[e] / 2
        self.halved.append(e)
        self.version += 1

    def is_halved(self, e: int) -> bool:
        return bool(self.w[e] != self.graph.ew[e])


class SubgraphView:
    """The induced subgraph ``G[Y]`` under a (possibly shared) weight overlay."""

    def __init__(
        self,
        graph: WeightedGraph,
        members: Iterable[int] | None = None,
        overlay: WeightOverlay | None = None,
    ):
        self.graph = graph
        self.overlay = overlay if overlay is not None else WeightOverlay(graph)
        if members is None:
            self.nodes = np.arange(graph.n, dtype=np.int64)
        else:
            self.nodes = np.array(sorted(set(int(v) for v in members)), dtype=np.int64)
        self.members = frozenset(self.nodes.tolist())
        self._cache: tuple[int, tuple] | None = None

    def restrict(self, members: Iterable[int]) -> "SubgraphView":
        return SubgraphView(self.graph, members, self.overlay)

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.nodes)

    def weight(self, u: int, v: int) -> float:
        return float(self.overlay.w[self.graph.edge_index(u, v)])

    def halve(self, u: int, v: int) -> None:
        self.overlay.halve(self.graph.edge_index(u, v))

    def local_index(self) -> dict[int, int]:
        return {int(v): i for i, v in enumerate(self.nodes)}

    def _induced(self):
        """Induced edges in local indices plus a CSR matrix, cached per overlay version."""
        if self._cache is not None and self._cache[0] == self.overlay.version:
            return self._cache[1]
        g = self.graph
        pos = np.full(g.n, -1, dtype=np.int64)
        pos[self.nodes] = np.arange(len(self.nodes))
        keep = (pos[g.eu] >= 0) & (pos[g.ev] >= 0)
        a, b = pos[g.eu[keep]], pos[g.ev[keep]]
        w = self.overlay.w[keep]
        n = len(self.nodes)
        mat = csr_matrix((w, (a, b)), shape=(n, n))
        data = (pos, a, b, w, mat)
        self._cache = (self.overlay.version, data)
        return data


@dataclass
class DistanceField:
    """Single-source (or virtual multi-source) distances inside a view."""

    source: int | None
    nodes: np.ndarray
    dist: np.ndarray
    parent: np.ndarray
    index: dict[int, int]

    def __getitem__(self, v: int) -> float:
        return float(self.dist[self.index[v]])

    def as_dict(self) -> dict[int, float]:
        return {int(v): float(d) for v, d in zip(self.nodes, self.dist)}

    def path_to(self, v: int) -> list[int]:
        """Vertices of the deterministic shortest path from the source to ``v``."""
        if math.isinf(self[v]):
            raise Disconnected(f"{v} unreachable")
        out = [v]
        while True:
            p = int(self.parent[self.index[out[-1]]])
            if p < 0:
                break
            out.append(p)
        out.reverse()
        return out


def _tight_parents(nodes, a, b, w, dist) -> np.ndarray:
    """Smallest-id predecessor on a tight edge, per local vertex (-1 if none)."""
    n = len(nodes)
    big = np.iinfo(np.int64).max
    parent = np.full(n, big, dtype=np.int64)
    src = np.concatenate([a, b])
    dst = np.concatenate([b, a])
    ww = np.concatenate([w, w])
    with np.errstate(invalid="ignore"):
        tight = np.isfinite(dist[src]) & (dist[src] + ww == dist[dst]) & (dist[src] < dist[dst])
    np.minimum.at(parent, dst[tight], nodes[src[tight]])
    parent[parent == big] = -1
    return parent


def dijkstra(view: SubgraphView, source: int) -> DistanceField:
    """Exact distances from ``source`` in ``G[Y]``; parent ties go to the smaller id."""
    if source not in view:
        raise NotInView(f"{source} not in view")
    return multi_source(view, {source: 0.0}, _source=source)


def multi_source(view: SubgraphView, offsets: Mapping[int, float], _source: int | None = None) -> DistanceField:
    """``min_p offsets[p] + dist(p, .)`` via a virtual source node."""
    for p in offsets:
        if p not in view:
            raise NotInView(f"{p} not in view")
    pos, a, b, w, mat = view._induced()
    n = len(view.nodes)
    if len(offsets) == 1 and next(iter(offsets.values())) == 0:
        (p,) = offsets
        dist = _csgraph_dijkstra(mat, directed=False, indices=int(pos[p]))
    else:
        srcs = np.array([pos[p] for p in offsets], dtype=np.int64)
        offs = np.array([float(offsets[p]) for p in offsets])
        rows = np.concatenate([a, np.full(len(srcs), n)])
        cols = np.concatenate([b, srcs])
        data = np.concatenate([w, offs])
        big = csr_matrix((data, (rows, cols)), shape=(n + 1, n + 1))
        dist = _csgraph_dijkstra(big, directed=False, indices=n)[:n]
    parent = _tight_parents(view.nodes, a, b, w, dist)
    if _source is None:
        for p, off in offsets.items():
            if dist[pos[p]] == off:
                parent[pos[p]] = -1
    return DistanceField(_source, view.nodes, dist, parent, view.local_index())


def ball(view: SubgraphView, v: int, r: float) -> frozenset[int]:
    """Closed ball ``{u in Y : dist(v, u, Y) <= r}``."""
    f = dijkstra(view, v)
    return frozenset(view.nodes[f.dist <= r].tolist())


def radius(view: SubgraphView, root: int) -> float:
    """Smallest ``D`` with ``B(root, D, Y) = Y``; infinite if ``G[Y]`` is disconnected."""
    f = dijkstra(view, root)
    return float(f.dist.max())


def diameter(g: WeightedGraph) -> float:
    return float(g.all_pairs().max())


def induced_distances(g: WeightedGraph, members: np.ndarray, limit: float = INF,
                      overlay: WeightOverlay | None = None) -> np.ndarray:
    """All-pairs distances of ``G[members]`` (local order), entries beyond ``limit`` may be inf."""
    if g.metric and overlay is None:
        return g.all_pairs()[np.ix_(members, members)]
    view = SubgraphView(g, members.tolist(), overlay)
    *_, mat = view._induced()
    return _csgraph_dijkstra(mat, directed=False, limit=limit)


def metric_closure(g: WeightedGraph, U: Iterable[int]) -> WeightedGraph:
    """Complete graph over ``U`` weighted by distances in ``g``; ``names`` are ``g``-ids."""
    us = sorted(set(int(u) for u in U))
    if not us:
        raise GraphError("metric closure of an empty set")
    d = g.all_pairs()
    edges = [(i, j, d[us[i], us[j]]) for i in range(len(us)) for j in range(i + 1, len(us))]
    return WeightedGraph(len(us), edges, names=us, metric=True, check_connected=False)
