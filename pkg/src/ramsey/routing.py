"""Stateless compact routing over a Ramsey forest.

Inside one tree every vertex stores its DFS interval, the port to its parent
and the intervals/ports of its heavy children (``size(c) * b >= size(v)``).
A destination label is its DFS number plus, for every light edge on the
root path, the pair (depth of the light edge's parent, port to take there).
A packet header is the destination label and nothing else.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .forest import ForestCollection
from .graph import WeightedGraph
from .tree import SpanningTree


class MalformedHeader(ValueError):
    """A header that no table entry can route (corrupted label)."""


class LoopDetected(RuntimeError):
    """A route exceeded ``2n`` hops."""


@dataclass(frozen=True)
class Table:
    dfs_in: int
    dfs_out: int
    depth: int
    parent_port: int | None
    heavy: tuple[tuple[int, int, int], ...]  # (in, out, port)

    def entries(self) -> int:
        """Interval-style entries: own interval, parent, heavy children."""
        return 2 + len(self.heavy)

    def words(self) -> int:
        return 4 + 3 * len(self.heavy)


@dataclass(frozen=True)
class Label:
    dfs: int
    light: tuple[tuple[int, int], ...]  # (depth of light parent, port), root to leaf

    def words(self) -> int:
        return 1 + len(self.light)


@dataclass(frozen=True)
class Decision:
    kind: str  # deliver | parent | heavy | light
    port: int | None = None


@dataclass
class TreeRoutingScheme:
    b: int
    tree: SpanningTree
    tables: list[Table]
    labels: list[Label]


def ceil_log(n: int, b: int) -> int:
    """Least ``e >= 0`` with ``b**e >= n``."""
    e, p = 0, 1
    while p < n:
        p *= b
        e += 1
    return e


def build_tree_scheme(T: SpanningTree, b: int) -> TreeRoutingScheme:
    if b < 2:
        raise ValueError("b must be >= 2")
    g = T.graph
    size = T.subtree_sizes()
    n = T.n
    dfs = [0] * n
    counter = 0
    stack = [T.root]
    while stack:
        v = stack.pop()
        dfs[v] = counter
        counter += 1
        stack.extend(reversed(T.children[v]))
    tables: list[Table] = [None] * n  # type: ignore[list-item]
    labels: list[Label] = [None] * n  # type: ignore[list-item]
    for v in T.order:
        p = T.parent[v]
        heavy = tuple(
            (dfs[c], dfs[c] + size[c] - 1, g.port(v, c)) for c in T.children[v] if size[c] * b >= size[v]
        )
        tables[v] = Table(dfs[v], dfs[v] + size[v] - 1, T.depth[v], None if p < 0 else g.port(v, p), heavy)
        if p < 0:
            labels[v] = Label(dfs[v], ())
        elif size[v] * b >= size[p]:
            labels[v] = Label(dfs[v], labels[p].light)
        else:
            labels[v] = Label(dfs[v], labels[p].light + ((T.depth[p], g.port(p, v)),))
    return TreeRoutingScheme(b, T, tables, labels)


def route_step(table: Table, header: Label) -> Decision:
    """Forwarding decision from the local table and the header alone."""
    d = header.dfs
    if d == table.dfs_in:
        return Decision("deliver")
    if not table.dfs_in < d <= table.dfs_out:
        if table.parent_port is None:
            raise MalformedHeader(f"dfs {d} outside the whole tree")
        return Decision("parent", table.parent_port)
    for lo, hi, port in table.heavy:
        if lo <= d <= hi:
            return Decision("heavy", port)
    for depth, port in header.light:
        if depth == table.depth:
            return Decision("light", port)
    raise MalformedHeader(f"no entry routes dfs {d} at depth {table.depth}")


@dataclass
class NetworkRoutingScheme:
    graph: WeightedGraph
    b: int
    forest: ForestCollection
    schemes: list[TreeRoutingScheme]

    def label(self, v: int) -> tuple[int, Label]:
        h = self.forest.home[v]
        return h, self.schemes[h].labels[v]

    def table(self, v: int) -> list[Table]:
        return [s.tables[v] for s in self.schemes]


def build_network_scheme(g: WeightedGraph, forest: ForestCollection, b: int) -> NetworkRoutingScheme:
    return NetworkRoutingScheme(g, b, forest, [build_tree_scheme(T, b) for T in forest.trees])


def route_in_tree(g: WeightedGraph, scheme: TreeRoutingScheme, s: int, t: int,
                  decisions: list | None = None) -> list[int]:
    """Hop sequence ``s .. t`` using only tables of ``scheme`` and ``t``'s label."""
    header = scheme.labels[t]
    path = [s]
    cur = s
    limit = 2 * g.n
    while True:
        dec = route_step(scheme.tables[cur], header)
        if decisions is not None:
            decisions.append((cur, dec))
        if dec.kind == "deliver":
            return path
        cur = g.via_port(cur, dec.port)
        path.append(cur)
        if len(path) > limit:
            raise LoopDetected(f"route {s}->{t} exceeded {limit} hops")


def simulate_route(g: WeightedGraph, scheme: NetworkRoutingScheme, s: int, t: int,
                   decisions: list | None = None) -> list[int]:
    """Route toward ``t`` in its home tree; ``[s]`` when ``s == t``."""
    h, _ = scheme.label(t)
    return route_in_tree(g, scheme.schemes[h], s, t, decisions)


@dataclass
class SizeReport:
    rows: list[tuple[int, int, int, int]]  # vertex, table words, max entries in one tree, label words

    def summary(self) -> dict[str, float]:
        cols = list(zip(*self.rows))
        out = {}
        for name, col in zip(("table_words", "tree_entries", "label_words"), cols[1:]):
            out[f"max_{name}"] = max(col)
            out[f"mean_{name}"] = sum(col) / len(col)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vertex", "table_words", "max_tree_entries", "label_words"])
        w.writerows(self.rows)
        return buf.getvalue()


def measure_scheme(scheme: NetworkRoutingScheme) -> SizeReport:
    rows = []
    for v in range(scheme.graph.n):
        tabs = scheme.table(v)
        rows.append((v, sum(t.words() for t in tabs), max(t.entries() for t in tabs),
                     1 + scheme.label(v)[1].words()))
    return SizeReport(rows)
