"""Approximate distance oracles built from repeated Ramsey partitions.

* ``basic``   -- every round partitions the whole graph for the current
  terminal set; the estimate is read in ``home(s)``.  Stretch below ``16k``.
* ``reduced`` -- every round partitions the metric closure over the remaining
  terminals only, so each tree is as large as the round's terminal set.
* ``eps``     -- ``ceil(1/eps)`` scaled copies; the estimate is the largest of
  the per-copy estimates ``(1 + (l+1) eps) 2**i``.  Stretch at most ``8(1+eps)k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import WeightedGraph, metric_closure
from .partition import Hierarchy, build_fpsdhpp
from .ultrametric import StepCounter, UltrametricTree, oracle_tree

VARIANTS = ("basic", "reduced")


@dataclass
class OracleCollection:
    variant: str
    k: int
    scale: float
    trees: list[UltrametricTree]
    home: list[int]  # vertex -> tree index
    hierarchies: list[Hierarchy] = field(default_factory=list, repr=False)
    round_sizes: list[int] = field(default_factory=list)  # |U| entering each round

    @property
    def n(self) -> int:
        return len(self.home)

    def size(self) -> int:
        """Total number of tree nodes."""
        return sum(len(t) for t in self.trees)


@dataclass
class EpsilonOracle:
    eps: float
    k: int
    copies: list[OracleCollection]


def copy_count(eps: float) -> int:
    """``ceil(1/eps)``, computed on the exact rational nearest to ``eps``."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return math.ceil(1 / Fraction(eps).limit_denominator(10**9))


def _round_scale(scale: float, k: int) -> None:
    if k < 1:
        raise ValueError("k must be >= 1")
    if scale < 1:
        raise ValueError("scale must be >= 1")


def build_basic(g: WeightedGraph, k: int, scale: float = 1.0) -> OracleCollection:
    _round_scale(scale, k)
    U = set(range(g.n))
    home = [-1] * g.n
    trees, hs, sizes = [], [], []
    while U:
        sizes.append(len(U))
        h = build_fpsdhpp(g, U, k, scale)
        idx = len(trees)
        for v in h.padded:
            home[v] = idx
        U -= h.padded
        hs.append(h)
        trees.append(oracle_tree(h))
    return OracleCollection("basic", k, float(scale), trees, home, hs, sizes)


def _lift(t: UltrametricTree, names: tuple[int, ...]) -> UltrametricTree:
    t.leaf_of = {names[v]: node for v, node in t.leaf_of.items()}
    return t


def build_reduced(g: WeightedGraph, k: int, scale: float = 1.0) -> OracleCollection:
    _round_scale(scale, k)
    U = set(range(g.n))
    home = [-1] * g.n
    trees, hs, sizes = [], [], []
    while U:
        sizes.append(len(U))
        gu = metric_closure(g, U)
        h = build_fpsdhpp(gu, range(gu.n), k, scale)
        idx = len(trees)
        padded = {gu.names[v] for v in h.padded}
        for v in padded:
            home[v] = idx
        U -= padded
        hs.append(h)
        trees.append(_lift(oracle_tree(h), gu.names))
    return OracleCollection("reduced", k, float(scale), trees, home, hs, sizes)


def build(g: WeightedGraph, k: int, variant: str = "basic", scale: float = 1.0) -> OracleCollection:
    if variant == "basic":
        return build_basic(g, k, scale)
    if variant == "reduced":
        return build_reduced(g, k, scale)
    raise ValueError(f"unknown variant {variant!r}")


def lca_level(o: OracleCollection, s: int, t: int, counter: StepCounter | None = None) -> int:
    """Hierarchy level of the LCA of ``s`` and ``t`` in the collection that pads ``s``."""
    hs = o.home[s]
    if o.variant == "reduced":
        ht = o.home[t]
        if ht < hs:
            s, t, hs = t, s, ht
    tree = o.trees[hs]
    if counter is not None:
        counter.tick(4)
    return tree.level[tree.lca(tree.leaf_of[s], tree.leaf_of[t], counter)]


def query(o: OracleCollection, s: int, t: int, counter: StepCounter | None = None) -> float:
    """Distance estimate ``scale * 2**(i+1)``; 0 when ``s == t``."""
    if s == t:
        return 0.0
    return o.scale * 2.0 ** (lca_level(o, s, t, counter) + 1)


def build_epsilon(g: WeightedGraph, k: int, eps: float, base: str = "basic") -> EpsilonOracle:
    count = copy_count(eps)
    copies = [build(g, k, base, 1 + l * eps) for l in range(count)]
    return EpsilonOracle(float(eps), k, copies)


def query_epsilon(o: EpsilonOracle, s: int, t: int, counter: StepCounter | None = None) -> float:
    if s == t:
        return 0.0
    best = 0.0
    for l, copy in enumerate(o.copies):
        i = lca_level(copy, s, t, counter)
        best = max(best, (1 + (l + 1) * o.eps) * 2.0**i)
    return best


def recurrence_rounds(n: int, k: int) -> int:
    """Rounds of ``m <- m - ceil(m**(1-1/k))`` needed to reach 0 from ``n``."""
    m, rounds = n, 0
    while m > 0:
        m -= ceil_root_power(m, k)
        rounds += 1
    return rounds


def ceil_root_power(m: int, k: int) -> int:
    """``ceil(m**(1-1/k))`` exactly: the least ``c`` with ``c**k >= m**(k-1)``."""
    if m <= 0:
        return 0
    target = m ** (k - 1)
    c = max(1, int(round(m ** (1 - 1 / k))))
    while c**k < target:
        c += 1
    while c > 1 and (c - 1) ** k >= target:
        c -= 1
    return c
