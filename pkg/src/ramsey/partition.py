"""Deterministic fully padded strong-diameter hierarchical partial partitions.

Level ``i`` clusters are balls of radius below ``scale * 2**i`` carved from
their level ``i+1`` parent.  Each carve picks the centre with the most marked
vertices nearby and grows the ball until the marked mass stops growing faster
than the ``1/k``-th root of the local density ratio; the marked vertices in the
cut annulus are unmarked.  Vertices still marked at the end are padded at every
level.

Radii are written in half-steps of ``rho_i = scale * 2**i / (4k)``::

    r(t) = scale * 2**(i-1) + t * rho_i        (t = 0 .. 2k)

so the cluster of index ``j`` is ``B(v, r(2j+1))``, its interior ``B(v, r(2j))``
and the unmarked annulus ``B(v, r(2j+2)) \\ B(v, r(2j))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import INF, GraphError, SubgraphView, WeightedGraph, diameter, dijkstra, induced_distances


class EmptyInput(GraphError):
    pass


class NoMarked(GraphError):
    pass


@dataclass(frozen=True)
class Cluster:
    level: int
    center: int
    members: tuple[int, ...]
    j: int | None
    interior: tuple[int, ...]
    responsibility: tuple[int, ...]
    parent: int | None  # index into the level above
    filler: bool = False  # carved after the marked vertices ran out


class MarkState:
    """The shrinking set of marked vertices."""

    def __init__(self, marked: Iterable[int]):
        self.marked: set[int] = set(marked)
        self.unmarked_log: list[int] = []

    def __contains__(self, v: int) -> bool:
        return v in self.marked

    def __len__(self) -> int:
        return len(self.marked)

    def unmark(self, vs: Iterable[int]) -> None:
        for v in vs:
            if v in self.marked:
                self.marked.remove(v)
                self.unmarked_log.append(v)

    def mask(self, nodes: np.ndarray) -> np.ndarray:
        return np.fromiter((int(v) in self.marked for v in nodes), dtype=bool, count=len(nodes))


@dataclass
class Hierarchy:
    graph: WeightedGraph
    U: frozenset[int]
    k: int
    scale: float
    phi: int
    levels: list[list[Cluster]]
    padded: frozenset[int]
    diameter: float
    js: list[tuple[int, int]] = field(default_factory=list)  # (level, j) of every marked carve

    def rho(self, i: int) -> float:
        return self.scale * 2.0**i / (4 * self.k)

    def cluster_of(self, v: int, i: int) -> int:
        """Index of the level-``i`` cluster containing ``v`` (the partition is total)."""
        return self._owner()[i][v]

    def _owner(self) -> list[dict[int, int]]:
        if not hasattr(self, "_owner_cache"):
            self._owner_cache = [
                {v: ci for ci, c in enumerate(level) for v in c.members} for level in self.levels
            ]
        return self._owner_cache

    def dump(self) -> str:
        """Line-oriented text form: ``level index center j parent : members``."""
        lines = [
            f"# hierarchy n={self.graph.n} k={self.k} scale={self.scale!r} phi={self.phi}",
            "# padded " + " ".join(str(v) for v in sorted(self.padded)),
        ]
        for i in range(self.phi, -1, -1):
            for ci, c in enumerate(self.levels[i]):
                j = "-" if c.j is None else str(c.j)
                par = "-" if c.parent is None else str(c.parent)
                mem = " ".join(str(v) for v in c.members)
                lines.append(f"{i} {ci} {c.center} {j} {par} : {mem}")
        return "\n".join(lines) + "\n"


def half_step_radius(i: int, t: int, k: int, scale: float) -> float:
    return scale * 2.0 ** (i - 1) * (2 * k + t) / (2 * k)


def num_levels(D: float) -> int:
    """``ceil(log2(D + 1))``."""
    return max(0, math.ceil(math.log2(D + 1)))


def _argmax_smallest(counts: np.ndarray) -> int:
    # nodes are id-sorted, so the first maximum is the smallest id
    return int(np.argmax(counts))


def pick_center(view: SubgraphView, marks: MarkState, radius: float) -> int:
    """Vertex of the view with the most marked vertices within ``radius``."""
    mk = marks.mask(view.nodes)
    if not mk.any():
        raise NoMarked("view has no marked vertex")
    D = induced_distances(view.graph, view.nodes, radius, view.overlay)
    counts = ((D <= radius) & mk[None, :]).sum(axis=1)
    return int(view.nodes[_argmax_smallest(counts)])


def _find_j_from_row(row: np.ndarray, mk: np.ndarray, i: int, k: int, scale: float) -> int:
    c = [int(((row <= half_step_radius(i, 2 * j, k, scale)) & mk).sum()) for j in range(k + 1)]
    if c[0] < 1:
        raise NoMarked("centre ball holds no marked vertex")
    # c[j+1] <= c[j] * (c[k] / c[0]) ** (1/k), compared exactly in integers
    for j in range(k):
        if c[j + 1] ** k * c[0] <= c[j] ** k * c[k]:
            return j
    raise AssertionError(f"no admissible j among {c}")


def find_j(view: SubgraphView, marks: MarkState, center: int, i: int, k: int, scale: float = 1.0) -> int:
    """Smallest ``j >= 0`` at which the marked ball stops growing too fast."""
    f = dijkstra(view, center)
    return _find_j_from_row(f.dist, marks.mask(view.nodes), i, k, scale)


def carve_level(
    graph: WeightedGraph,
    parent: Cluster,
    parent_index: int,
    i: int,
    k: int,
    scale: float,
    marks: MarkState,
    js: list[tuple[int, int]] | None = None,
) -> list[Cluster]:
    """Partition ``parent`` into level-``i`` clusters, unmarking cut annuli."""
    if i == 0 and scale < 2:
        # singletons meet the radius bound, and the padding radius scale/(4k) < 1 <= min weight
        # keeps every vertex padded, so nothing needs unmarking
        return [
            Cluster(0, v, (v,), 0, (v,), (v,) if v in marks else (), parent_index)
            for v in parent.members
        ]
    H = np.array(parent.members, dtype=np.int64)
    out: list[Cluster] = []
    r_small = half_step_radius(i, 0, k, scale)
    r_big = half_step_radius(i, 2 * k, k, scale)
    while len(H):
        mk = marks.mask(H)
        filler = not mk.any()
        if filler:
            mk = np.ones(len(H), dtype=bool)
        D = induced_distances(graph, H, r_big, None)
        counts = ((D <= r_small) & mk[None, :]).sum(axis=1)
        c = _argmax_smallest(counts)
        row = D[c]
        if filler:
            j = 0
        else:
            j = _find_j_from_row(row, mk, i, k, scale)
            if js is not None:
                js.append((i, j))
        inner = row <= half_step_radius(i, 2 * j, k, scale)
        taken = row <= half_step_radius(i, 2 * j + 1, k, scale)
        outer = row <= half_step_radius(i, 2 * j + 2, k, scale)
        if filler:
            res: tuple[int, ...] = ()
        else:
            res = tuple(H[outer & mk].tolist())
            marks.unmark(H[outer & ~inner & mk].tolist())
        out.append(
            Cluster(
                level=i,
                center=int(H[c]),
                members=tuple(H[taken].tolist()),
                j=j,
                interior=tuple(H[inner].tolist()),
                responsibility=res,
                parent=parent_index,
                filler=filler,
            )
        )
        H = H[~taken]
    return out


def build_fpsdhpp(g: WeightedGraph, U: Iterable[int], k: int, scale: float = 1.0) -> Hierarchy:
    """Build the hierarchy for terminal set ``U``; ``padded`` is what stays marked."""
    U = frozenset(int(u) for u in U)
    if not U:
        raise EmptyInput("U is empty")
    if k < 1:
        raise ValueError("k must be >= 1")
    if scale < 1:
        raise ValueError("scale must be >= 1")
    if not U <= set(range(g.n)):
        raise GraphError("U must be a subset of the vertices")
    D = diameter(g)
    phi = num_levels(D)
    marks = MarkState(U)
    everything = np.arange(g.n, dtype=np.int64)
    top_r = scale * 2.0 ** (phi - 1)
    mk = marks.mask(everything)
    Dm = induced_distances(g, everything, top_r, None)
    root_center = _argmax_smallest(((Dm <= top_r) & mk[None, :]).sum(axis=1))
    all_v = tuple(range(g.n))
    levels: list[list[Cluster]] = [[] for _ in range(phi + 1)]
    levels[phi] = [Cluster(phi, root_center, all_v, None, all_v, tuple(sorted(U)), None)]
    js: list[tuple[int, int]] = []
    for i in range(phi - 1, -1, -1):
        for pi, parent in enumerate(levels[i + 1]):
            levels[i].extend(carve_level(g, parent, pi, i, k, scale, marks, js))
    return Hierarchy(g, U, k, float(scale), phi, levels, frozenset(marks.marked), D, js)
