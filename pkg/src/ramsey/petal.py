"""Hierarchical petal decomposition with region-growing radius selection.

A petal around target ``t`` (seen from centre ``x0`` inside ``G[Y]``) is::

    W_r = union over p on the x0 -> t shortest path with d(p, t) <= r of
          { u : cone(p, u) <= (r - d(p, t)) / 2 },
    cone(p, u) = d(x0, p) + d(p, u) - d(x0, u).

Equivalently a vertex enters at ``entry(u) = min_p d(p, t) + 2 cone(p, u)``
and ``W_r = {u : entry(u) <= r}``.  Because ``p`` lies on a shortest path,
``entry(u) = d(x0, t) + 2 S(u) - 2 d(x0, u)`` with
``S(u) = min_p d(x0, p) / 2 + d(p, u)``, a single multi-source search.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import SubgraphView, WeightedGraph, dijkstra, multi_source, radius
from .partition import MarkState
from .tree import SpanningTree


class InfeasibleSelection(AssertionError):
    """No candidate satisfied a region-growing inequality (cannot happen for a correct run)."""


def petal_levels(m: int) -> int:
    """Number of sub-intervals ``L`` for ``m`` marked vertices.

    ``ceil(1 + log2 log2 m)`` for ``m >= 3``, i.e. ``1 + min{a : 2**(2**a) >= m}``;
    ``m == 2`` uses ``L = 2`` (interval selection needs ``L >= 2`` once a marked
    vertex can be charged) and ``m <= 1`` uses ``L = 1``.
    """
    if m <= 1:
        return 1
    if m == 2:
        return 2
    a = 0
    while 2 ** (2**a) < m:
        a += 1
    return 1 + a


def cone_dist(view: SubgraphView, x: int, y: int, u: int, v: int) -> float:
    """``|(d(x,u) - d(y,u)) - (d(x,v) - d(y,v))|`` inside the view."""
    dx, dy = dijkstra(view, x), dijkstra(view, y)
    return abs((dx[u] - dy[u]) - (dx[v] - dy[v]))


def petal_set(view: SubgraphView, x0: int, t: int, r: float) -> frozenset[int]:
    """``W_r`` straight from its definition (one search per path vertex)."""
    fx = dijkstra(view, x0)
    out: set[int] = set()
    for p in fx.path_to(t):
        fp = dijkstra(view, p)
        dpt = fp[t]
        if dpt > r:
            continue
        budget = (r - dpt) / 2
        for u in view.nodes.tolist():
            cone = abs((fx[p] - fp[p]) - (fx[u] - fp[u]))
            if cone <= budget:
                out.add(u)
    return frozenset(out)


class PetalProfile:
    """Entry radius of every vertex of ``Y`` into ``W_r(Y, x0, t)``."""

    def __init__(self, view: SubgraphView, x0: int, t: int):
        fx = dijkstra(view, x0)
        self.path = fx.path_to(t)
        offsets = {p: fx[p] / 2 for p in self.path}
        s = multi_source(view, offsets)
        self.nodes = view.nodes
        self.index = fx.index
        self.dist_x0 = fx.dist
        self.entry = fx[t] + 2 * s.dist - 2 * fx.dist

    def petal(self, r: float) -> frozenset[int]:
        return frozenset(self.nodes[self.entry <= r].tolist())

    def count(self, r: float, mask: np.ndarray) -> int:
        return int(((self.entry <= r) & mask).sum())


@dataclass
class PetalCut:
    lo: float
    hi: float
    L: int
    m: int
    k: int
    r: float
    side: str  # forward | backward | trivial-forward | trivial-backward
    interval: tuple[float, float] | None  # chosen (a, b) grid interval
    petal: frozenset[int]
    unmarked: tuple[int, ...]
    path: list[int]  # x0 -> t shortest path in Y

    @property
    def R(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return self.lo + self.R / 2


def create_petal(view: SubgraphView, lo: float, hi: float, x0: int, t: int,
                 marks: MarkState, k: int, profile: PetalProfile | None = None) -> PetalCut:
    """Pick ``r`` in ``[lo, hi]``, unmark the cut annulus and return ``W_r``."""
    if not hi > lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    prof = profile if profile is not None else PetalProfile(view, x0, t)
    mk = marks.mask(prof.nodes)
    m = int(mk.sum())
    L = petal_levels(m)
    R = hi - lo
    grid = [lo + R * s / (2 * L) for s in range(2 * L + 1)]
    grid[-1] = hi
    mid = grid[L]
    width = R / (4 * L * k)

    def w(r: float) -> int:
        return prof.count(r, mk)

    def q(r: float) -> int:
        return m - w(r)

    interval = None
    if 2 * w(mid) <= m:
        if w(grid[1]) == 0:
            side = "trivial-forward"
            r = lo + R / (4 * L)
            lower, upper = r - width, min(r + width, grid[1])
        else:
            side = "forward"
            for i in range(L - 1):
                a, b = grid[L - i - 1], grid[L - i]
                wa, wb = w(a), w(b)
                if wa * m >= wb * wb:
                    break
            else:
                raise InfeasibleSelection(f"no interval in [{lo}, {mid}] (m={m}, L={L})")
            pts = [b - s * (b - a) / k for s in range(k + 1)]
            pts[k] = a
            for s in range(k):
                upper, lower = pts[s], pts[s + 1]
                if w(upper) ** k * wa <= w(lower) ** k * wb:
                    break
            else:
                raise InfeasibleSelection(f"no radius in [{a}, {b}]")
            r = b - (s + 0.5) * (b - a) / k
            interval = (a, b)
    else:
        if q(grid[2 * L - 1]) == 0:
            side = "trivial-backward"
            r = hi - R / (4 * L)
            lower, upper = max(r - width, grid[2 * L - 1]), r + width
        else:
            side = "backward"
            for i in range(L - 1):
                b, a = grid[L + i], grid[L + i + 1]
                qa, qb = q(a), q(b)
                if qa * m >= qb * qb:
                    break
            else:
                raise InfeasibleSelection(f"no interval in [{mid}, {hi}] (m={m}, L={L})")
            pts = [b + s * (a - b) / k for s in range(k + 1)]
            pts[k] = a
            for s in range(k):
                lower, upper = pts[s], pts[s + 1]
                if q(lower) ** k * qa <= q(upper) ** k * qb:
                    break
            else:
                raise InfeasibleSelection(f"no radius in [{b}, {a}]")
            r = b + (s + 0.5) * (a - b) / k
            interval = (a, b)
    ring = (prof.entry <= upper) & ~(prof.entry <= lower) & mk
    unmarked = tuple(prof.nodes[ring].tolist())
    marks.unmark(unmarked)
    return PetalCut(lo, hi, L, m, k, r, side, interval, prof.petal(r), unmarked, prof.path)


@dataclass
class Part:
    members: frozenset[int]
    center: int
    target: int
    delta: float = 0.0


@dataclass
class DecompositionRecord:
    x0: int
    t: int
    delta: float
    members: frozenset[int]
    parts: list[Part]  # parts[0] is the central cluster X_0
    edges: list[tuple[int, int]]  # (y_j, x_j) for j >= 1
    cuts: list[PetalCut]
    halved: list[int]  # graph edge ids halved by this call
    depth: int = 0
    # (petals carved so far, Y_j, working weights, marked set) snapshots
    states: list[tuple[int, frozenset[int], np.ndarray, frozenset[int]]] = field(default_factory=list, repr=False)


def _crossing(path: list[int], petal: frozenset[int]) -> int:
    """Position of the first petal vertex on ``path``; the path must cross exactly once."""
    inside = [v in petal for v in path]
    flips = sum(1 for a, b in zip(inside, inside[1:]) if a != b)
    if flips != 1 or inside[0] or not inside[-1]:
        raise AssertionError(f"path crosses petal boundary {flips} times")
    return inside.index(True)


def petal_decomposition(view: SubgraphView, x0: int, t: int, delta: float, marks: MarkState,
                        k: int, keep_states: bool = False) -> DecompositionRecord:
    """Split ``G[X]`` into a central cluster around ``x0`` and petals."""
    fx = dijkstra(view, x0)
    dX = fx.as_dict()
    Y = set(view.members)
    parts: list[Part] = [Part(frozenset(), x0, t)]
    edges: list[tuple[int, int]] = []
    cuts: list[PetalCut] = []
    halved_before = len(view.overlay.halved)
    states = []

    def snapshot():
        if keep_states:
            states.append((len(cuts), frozenset(Y), view.overlay.w.copy(), frozenset(marks.marked)))

    snapshot()
    dxt = dX[t]
    if dxt >= delta / 2:
        cut = create_petal(view, dxt - delta / 2, dxt - delta / 4, x0, t, marks, k)
        pos = _crossing(cut.path, cut.petal)
        x1, y1 = cut.path[pos], cut.path[pos - 1]
        Y -= cut.petal
        parts.append(Part(cut.petal, x1, t))
        edges.append((y1, x1))
        cuts.append(cut)
        parts[0].target = y1
        snapshot()
    far = 3 * delta / 4
    while True:
        cand = [v for v in Y if dX[v] > far]
        if not cand:
            break
        tj = min(cand, key=lambda v: (-dX[v], v))
        cut = create_petal(view.restrict(Y), 0.0, delta / 8, x0, tj, marks, k)
        pos = _crossing(cut.path, cut.petal)
        xj, yj = cut.path[pos], cut.path[pos - 1]
        Y -= cut.petal
        for a, b in zip(cut.path[pos:], cut.path[pos + 1:]):
            view.halve(a, b)
        parts.append(Part(cut.petal, xj, tj))
        edges.append((yj, xj))
        cuts.append(cut)
        snapshot()
    parts[0].members = frozenset(Y)
    for p in parts:
        p.delta = radius(view.restrict(p.members), p.center)
    return DecompositionRecord(x0, t, delta, frozenset(view.members), parts, edges, cuts,
                               view.overlay.halved[halved_before:], states)


@dataclass
class SdhpCluster:
    """One cluster of the strong-diameter hierarchy induced by the recursion."""

    depth: int
    members: frozenset[int]
    center: int
    target: int
    delta: float
    parent: int | None
    record: int | None = None  # index of its decomposition record (None for singletons)


@dataclass
class PetalRun:
    tree: SpanningTree
    survivors: frozenset[int]
    marked_initially: frozenset[int]
    clusters: list[SdhpCluster]
    records: list[DecompositionRecord]
    weights: np.ndarray  # final working weights
    k: int

    def trace(self) -> list[dict]:
        """One JSON-ready record per petal cut."""
        out = []
        for rec in self.records:
            for cut, part in zip(rec.cuts, rec.parts[1:]):
                out.append({
                    "level": rec.depth, "center": rec.x0, "target": part.target,
                    "range": [cut.lo, cut.hi], "branch": cut.side, "r": cut.r,
                    "L": cut.L, "m": cut.m, "size": len(cut.petal),
                })
        return out


def hierarchical_petal_decomposition(view: SubgraphView, x0: int, t: int, delta: float,
                                     marks: MarkState, k: int) -> PetalRun:
    """Spanning tree of ``G[X]`` plus the vertices that stay marked throughout."""
    initial = frozenset(marks.marked & view.members)
    clusters: list[SdhpCluster] = []
    records: list[DecompositionRecord] = []
    edges: list[tuple[int, int]] = []

    def recurse(sub: SubgraphView, x: int, tgt: int, d: float, depth: int, parent: int | None):
        idx = len(clusters)
        clusters.append(SdhpCluster(depth, sub.members, x, tgt, d, parent))
        if len(sub) == 1:
            return
        rec = petal_decomposition(sub, x, tgt, d, marks, k)
        rec.depth = depth
        clusters[idx].record = len(records)
        records.append(rec)
        edges.extend(rec.edges)
        for part in rec.parts:
            recurse(sub.restrict(part.members), part.center, part.target, part.delta, depth + 1, idx)

    recurse(view, x0, t, delta, 0, None)
    g = view.graph
    if len(view) == g.n:
        tree = SpanningTree(g, x0, edges)
    else:
        loc = {v: i for i, v in enumerate(view.nodes.tolist())}
        sg = WeightedGraph(len(loc), [(loc[u], loc[v], w) for u, v, w in g.edges() if u in loc and v in loc],
                           names=list(loc))
        tree = SpanningTree(sg, loc[x0], [(loc[u], loc[v]) for u, v in edges])
    return PetalRun(tree, frozenset(marks.marked) & initial, initial, clusters, records,
                    view.overlay.w.copy(), k)


def run_from_root(g: WeightedGraph, marks: MarkState, k: int, root: int = 0) -> PetalRun:
    """Decompose the whole graph from ``root`` (root doubles as the first target)."""
    view = SubgraphView(g)
    delta = radius(view, root)
    return hierarchical_petal_decomposition(view, root, root, delta, marks, k)
