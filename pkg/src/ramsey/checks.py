"""Executable guarantees: every check returns ``Check`` rows (measured vs bound)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .forest import ForestCollection, l_max, stretch_bound
from .graph import SubgraphView, WeightedGraph, WeightOverlay, induced_distances
from .oracle import EpsilonOracle, OracleCollection, query, query_epsilon, recurrence_rounds
from .partition import Hierarchy, MarkState
from .petal import PetalRun, petal_decomposition
from .routing import NetworkRoutingScheme, ceil_log, route_in_tree, route_step, simulate_route
from .ultrametric import embed

RTOL = 1e-9


@dataclass
class Check:
    name: str
    measured: float
    bound: float
    ok: bool

    @property
    def status(self) -> str:
        return "pass" if self.ok else "FAIL"


def le(a: float, b: float) -> bool:
    """``a <= b`` up to relative tolerance."""
    return a <= b + RTOL * abs(b)


def _le_check(name: str, measured: float, bound: float) -> Check:
    return Check(name, measured, bound, le(measured, bound))


def _flag(name: str, bad: int) -> Check:
    """A structural check: ``bad`` counts violations, bound is zero."""
    return Check(name, bad, 0, bad == 0)


def survivors_enough(s: int, m: int, k: int) -> bool:
    """``s >= m**(1 - 1/k)`` decided exactly in integers."""
    if m == 0:
        return True
    return s**k >= m ** (k - 1)


# -- hierarchy / embedding ---------------------------------------------------

def hierarchy_checks(h: Hierarchy) -> list[Check]:
    g, n = h.graph, h.graph.n
    D = g.all_pairs()
    disjoint = refine = radius_bad = nest = 0
    for i, level in enumerate(h.levels):
        seen: set[int] = set()
        for c in level:
            mem = set(c.members)
            if seen & mem:
                disjoint += 1
            seen |= mem
            if i < h.phi:
                par = h.levels[i + 1][c.parent]
                if not mem <= set(par.members):
                    refine += 1
                if not set(c.interior) <= mem:
                    nest += 1
            order = sorted(mem)
            row = induced_distances(g, np.array(order))[order.index(c.center)]
            if not float(np.max(row)) < h.scale * 2.0**i:
                radius_bad += 1
        if seen != set(range(n)):
            refine += 1
    pad_bad = 0
    for v in h.padded:
        for i in range(h.phi + 1):
            c = h.levels[i][h.cluster_of(v, i)]
            ball = set(np.nonzero(D[v] <= h.rho(i))[0].tolist())
            if not ball <= set(c.members):
                pad_bad += 1
    max_j = max((j for _, j in h.js), default=0)
    m, s = len(h.U), len(h.padded)
    return [
        _flag("partition.disjoint", disjoint),
        _flag("partition.refines", refine),
        _flag("partition.interior_nested", nest),
        _flag("partition.radius", radius_bad),
        _flag("partition.padded_every_level", pad_bad),
        Check("partition.survivors", s, m ** (1 - 1 / h.k), survivors_enough(s, m, h.k)),
        Check("partition.max_j", max_j, h.k - 1, max_j <= h.k - 1),
    ]


def embedding_checks(h: Hierarchy) -> list[Check]:
    T = embed(h)
    D = h.graph.all_pairs()
    pts = sorted(h.padded)
    worst, contract = 0.0, 0
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            u, v = pts[a], pts[b]
            dt, dg = T.distance(u, v), D[u, v]
            if not le(dg, dt):
                contract += 1
            worst = max(worst, dt / dg)
    return [_flag("ultrametric.noncontracting", contract),
            _le_check("ultrametric.distortion", worst, 8 * h.k - 2)]


# -- oracles -----------------------------------------------------------------

def _stretch_table(D: np.ndarray, est) -> tuple[float, int]:
    n = len(D)
    worst, contract = 0.0, 0
    for s in range(n):
        for t in range(n):
            if s == t:
                if est(s, t) != 0:
                    contract += 1
                continue
            e = est(s, t)
            if not le(D[s, t], e):
                contract += 1
            worst = max(worst, e / D[s, t])
    return worst, contract


def oracle_checks(o: OracleCollection, g: WeightedGraph) -> list[Check]:
    D = g.all_pairs()
    worst, contract = _stretch_table(D, lambda s, t: query(o, s, t))
    rounds = len(o.trees)
    bound = 16 * o.k
    return [
        _flag(f"oracle.{o.variant}.noncontracting", contract),
        Check(f"oracle.{o.variant}.stretch", worst, bound, worst < bound),
        _le_check(f"oracle.{o.variant}.collections", rounds, recurrence_rounds(g.n, o.k)),
        _flag(f"oracle.{o.variant}.home_defined", sum(1 for h in o.home if h < 0)),
    ]


def epsilon_checks(o: EpsilonOracle, g: WeightedGraph) -> list[Check]:
    D = g.all_pairs()
    worst, contract = _stretch_table(D, lambda s, t: query_epsilon(o, s, t))
    return [_flag("oracle.eps.noncontracting", contract),
            _le_check("oracle.eps.stretch", worst, 8 * (1 + o.eps) * o.k)]


# -- petal runs / forest -----------------------------------------------------

def petal_checks(run: PetalRun, g: WeightedGraph) -> list[Check]:
    """Structural guarantees of one hierarchical run over the whole graph ``g``."""
    k = run.k
    child_bad = 0
    worst_child = 0.0
    for rec in run.records:
        for p in rec.parts:
            worst_child = max(worst_child, p.delta / rec.delta)
            if not le(p.delta, 0.75 * rec.delta):
                child_bad += 1
    halved = [e for rec in run.records for e in rec.halved]
    T = run.tree
    work_ratio = orig_ratio = 0.0
    for c in run.clusters:
        if len(c.members) == 1:
            continue
        dw = T.distances_from(c.center, run.weights, c.members)
        do = T.distances_from(c.center, None, c.members)
        if len(dw) != len(c.members):
            child_bad += 1
        work_ratio = max(work_ratio, max(dw.values()) / c.delta)
        orig_ratio = max(orig_ratio, max(do.values()) / c.delta)
    D = g.all_pairs()
    rho = 2**7 * l_max(g.n) * k
    pad_bad = 0
    children: dict[int, list[int]] = {}
    for i, c in enumerate(run.clusters):
        if c.parent is not None:
            children.setdefault(c.parent, []).append(i)
    for i, c in enumerate(run.clusters):
        if len(c.members) == 1:
            continue
        for x in run.survivors & c.members:
            ball = set(np.nonzero(D[x] <= c.delta / rho)[0].tolist())
            child = next(run.clusters[j] for j in children[i] if x in run.clusters[j].members)
            if not ball <= child.members:
                pad_bad += 1
    S = stretch_bound(g.n, k)
    worst = 0.0
    for v in run.survivors:
        td = T.distances_from(v)
        for u in range(g.n):
            if u != v:
                worst = max(worst, td[u] / D[v, u])
    m, s = len(run.marked_initially), len(run.survivors)
    return [
        _le_check("petal.child_radius_ratio", worst_child, 0.75),
        _flag("petal.child_radius_violations", child_bad),
        _le_check("petal.tree_radius_working", work_ratio, 4.0),
        _le_check("petal.tree_radius_original", orig_ratio, 8.0),
        _flag("petal.edge_halved_twice", len(halved) - len(set(halved))),
        Check("petal.survivors", s, m ** (1 - 1 / k) if m else 0, survivors_enough(s, m, k)),
        _flag("petal.survivor_padding", pad_bad),
        _le_check("petal.survivor_stretch", worst, S),
    ]


def observation_check(g: WeightedGraph, x0: int, t: int, delta: float, marked, k: int) -> Check:
    """Rerunning from any intermediate state reproduces the remaining petals."""
    view = SubgraphView(g)
    rec = petal_decomposition(view, x0, t, delta, MarkState(marked), k, keep_states=True)
    bad = 0
    for j, Y, w, mk in rec.states:
        ov = WeightOverlay(g)
        ov.w = w.copy()
        sub = SubgraphView(g, Y, ov)
        tj = t if j == 0 else rec.parts[0].target
        again = petal_decomposition(sub, x0, tj, delta, MarkState(mk), k)
        want = [(p.members, p.center, p.target) for p in [rec.parts[0]] + rec.parts[j + 1:]]
        got = [(p.members, p.center, p.target) for p in again.parts]
        if want != got or again.edges != rec.edges[j:]:
            bad += 1
    return Check("petal.observation_rerun", bad, 0, bad == 0)


def forest_checks(f: ForestCollection, g: WeightedGraph) -> list[Check]:
    n, k = g.n, f.k
    D = g.all_pairs()
    S = stretch_bound(n, k)
    worst = 0.0
    for v in range(n):
        td = f.trees[f.home[v]].distances_from(v)
        for u in range(n):
            if u != v:
                worst = max(worst, td[u] / D[v, u])
    low = sum(1 for M, s in zip(f.marked, f.survivors) if not survivors_enough(len(s), len(M), k))
    covered = sum(len(s) for s in f.survivors)
    rec = recurrence_rounds(n, k)
    span_bad = sum(1 for T in f.trees if len(T.edges) != n - 1)
    return [
        _flag("forest.survivors_per_iteration", low),
        _le_check("forest.home_stretch", worst, S),
        _le_check("forest.tree_count", len(f.trees), rec),
        _le_check("forest.recurrence_vs_knk", rec, math.ceil(k * n ** (1 / k) - RTOL)),
        Check("forest.home_total", covered, n, covered == n and min(f.home) >= 0),
        _flag("forest.spanning", span_bad),
    ]


# -- routing -----------------------------------------------------------------

def routing_checks(scheme: NetworkRoutingScheme, all_tree_pairs: bool = True) -> list[Check]:
    g, f, b = scheme.graph, scheme.forest, scheme.b
    n = g.n
    wrong = 0
    if all_tree_pairs:
        for ts in scheme.schemes:
            for s in range(n):
                for t in range(n):
                    if route_in_tree(g, ts, s, t) != ts.tree.path(s, t):
                        wrong += 1
    D = g.all_pairs()
    S = stretch_bound(n, f.k)
    worst, replay_bad = 0.0, 0
    for t in range(n):
        for s in range(n):
            if s == t:
                continue
            decisions: list = []
            path = scheme.schemes[f.home[t]].tree.path(s, t)
            got = simulate_route(g, scheme, s, t, decisions)
            if got != path:
                wrong += 1
            h, lab = scheme.label(t)
            for v, dec in reversed(decisions):
                if route_step(scheme.schemes[h].tables[v], lab) != dec:
                    replay_bad += 1
            length = sum(g.weight(a, c) for a, c in zip(got, got[1:]))
            worst = max(worst, length / D[s, t])
    lab_bound = 2 + ceil_log(n, b)
    max_label = max(1 + scheme.label(v)[1].words() for v in range(n))
    max_entries = max(t.entries() for ts in scheme.schemes for t in ts.tables)
    return [
        _flag("routing.tree_path_exact", wrong),
        _le_check("routing.stretch_toward_t", worst, S),
        _le_check("routing.label_words", max_label, lab_bound),
        _le_check("routing.table_entries_per_tree", max_entries, b + 2),
        _flag("routing.stateless_replay", replay_bad),
    ]
