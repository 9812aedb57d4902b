import math
import random
from collections import defaultdict

import pytest
from conftest import connected_graphs
from hypothesis import given
from hypothesis import strategies as st
from oracles import floyd_warshall, tree_path

from ramsey.checks import routing_checks
from ramsey.forest import build_forest, stretch_bound
from ramsey.generate import generate
from ramsey.graph import WeightedGraph
from ramsey.routing import (
    Label, LoopDetected, MalformedHeader, Table, build_network_scheme, build_tree_scheme, ceil_log,
    measure_scheme, route_in_tree, route_step, simulate_route,
)
from ramsey.tree import SpanningTree


def star(leaves):
    return WeightedGraph(leaves + 1, [(0, i, 1) for i in range(1, leaves + 1)])


def whole_tree(g, root=0):
    return SpanningTree(g, root, [(u, v) for u, v, _ in g.edges()])


def adjacency(edges):
    adj = defaultdict(list)
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


class TestLabels:
    def test_path_all_heavy(self):
        g = generate("path", 20)
        sch = build_tree_scheme(whole_tree(g), 2)
        assert all(lab.light == () for lab in sch.labels)
        assert [lab.dfs for lab in sch.labels] == list(range(20))

    def test_star_leaves_light(self):
        sch = build_tree_scheme(whole_tree(star(8)), 4)
        assert sch.labels[0] == Label(0, ())
        for leaf in range(1, 9):
            assert sch.labels[leaf].light == ((0, leaf - 1),)
        assert sch.tables[0].heavy == ()

    def test_heavy_rule_is_inclusive(self):
        # star with 3 leaves: size(leaf) * 4 >= 4
        sch = build_tree_scheme(whole_tree(star(3)), 4)
        assert len(sch.tables[0].heavy) == 3 and all(lab.light == () for lab in sch.labels)

    def test_bad_b(self, p3):
        with pytest.raises(ValueError):
            build_tree_scheme(whole_tree(p3), 1)

    def test_ceil_log(self):
        assert [ceil_log(n, 2) for n in (1, 2, 3, 4, 5, 1024, 1025)] == [0, 1, 2, 2, 3, 10, 11]
        for n in range(1, 500):
            for b in (2, 3, 7):
                assert ceil_log(n, b) == math.ceil(math.log(n, b) - 1e-12)

    @given(connected_graphs(min_n=1, max_n=30), st.integers(2, 6))
    def test_light_count_bound(self, g, b):
        T = whole_tree(g) if g.m == g.n - 1 else build_forest(g, 2).trees[0]
        sch = build_tree_scheme(T, b)
        assert all(len(lab.light) <= ceil_log(g.n, b) for lab in sch.labels)
        assert all(len(t.heavy) <= b for t in sch.tables)


class TestRouteStep:
    def test_deliver(self):
        assert route_step(Table(3, 5, 1, 0, ()), Label(3, ())).kind == "deliver"

    def test_parent(self):
        dec = route_step(Table(3, 5, 1, 2, ()), Label(7, ()))
        assert dec.kind == "parent" and dec.port == 2

    def test_heavy_then_light(self):
        t = Table(0, 9, 0, None, ((1, 5, 0),))
        assert route_step(t, Label(4, ())).kind == "heavy"
        dec = route_step(t, Label(7, ((0, 3),)))
        assert dec.kind == "light" and dec.port == 3

    def test_star_root_to_leaf(self):
        sch = build_tree_scheme(whole_tree(star(8)), 4)
        dec = route_step(sch.tables[0], sch.labels[5])
        assert dec.kind == "light" and dec.port == 4

    def test_malformed(self):
        with pytest.raises(MalformedHeader):
            route_step(Table(0, 9, 0, None, ()), Label(4, ()))
        with pytest.raises(MalformedHeader):
            route_step(Table(0, 9, 0, None, ()), Label(12, ()))


class TestRoutes:
    def test_p3(self, p3):
        f = build_forest(p3, 2)
        sch = build_network_scheme(p3, f, 2)
        assert simulate_route(p3, sch, 0, 2) == [0, 1, 2]
        assert simulate_route(p3, sch, 1, 1) == [1]

    def test_loop_detected(self, p3):
        sch = build_tree_scheme(whole_tree(p3), 2)
        # vertex 1 forwards everything back to 0 and 0 forwards everything to 1
        sch.tables[1] = Table(1, 1, 1, 0, ())
        sch.tables[0] = Table(0, 0, 0, 0, ())
        with pytest.raises(LoopDetected):
            route_in_tree(p3, sch, 0, 2)

    @given(connected_graphs(min_n=2, max_n=14), st.integers(2, 5), st.integers(1, 3))
    def test_exact_tree_paths(self, g, b, k):
        f = build_forest(g, k)
        sch = build_network_scheme(g, f, b)
        for ts in sch.schemes:
            adj = adjacency(ts.tree.edges)
            for s in range(g.n):
                for t in range(g.n):
                    assert route_in_tree(g, ts, s, t) == tree_path(adj, s, t)

    @given(connected_graphs(min_n=2, max_n=14), st.integers(2, 5), st.integers(1, 3))
    def test_stretch_and_sizes(self, g, b, k):
        f = build_forest(g, k)
        sch = build_network_scheme(g, f, b)
        fw = floyd_warshall(g.n, g.edges())
        S = stretch_bound(g.n, k)
        for s in range(g.n):
            for t in range(g.n):
                if s != t:
                    p = simulate_route(g, sch, s, t)
                    assert sum(g.weight(x, y) for x, y in zip(p, p[1:])) <= S * fw[s][t] * (1 + 1e-9)
        rep = measure_scheme(sch)
        for v, words, entries, lwords in rep.rows:
            assert lwords <= 2 + ceil_log(g.n, b) + 1
            assert entries <= b + 2

    def test_stateless_replay(self):
        g = generate("random", 60, 2)
        sch = build_network_scheme(g, build_forest(g, 2), 3)
        rng = random.Random(0)
        pairs = [(rng.randrange(60), rng.randrange(60)) for _ in range(300)]
        # record every decision, then replay them in shuffled order from table and header only
        log = []
        for s, t in pairs:
            dec = []
            simulate_route(g, sch, s, t, dec)
            h, lab = sch.label(t)
            log.extend((h, v, lab, d) for v, d in dec)
        rng.shuffle(log)
        for h, v, lab, d in log:
            assert route_step(sch.schemes[h].tables[v], lab) == d

    def test_checks_pass_on_larger_graphs(self):
        for fam, n in (("random", 100), ("grid", 64), ("star", 50)):
            g = generate(fam, n, 1)
            sch = build_network_scheme(g, build_forest(g, 2), 4)
            assert [c.name for c in routing_checks(sch) if not c.ok] == []


def test_size_report_csv(p3):
    sch = build_network_scheme(p3, build_forest(p3, 2), 2)
    rep = measure_scheme(sch)
    lines = rep.to_csv().splitlines()
    assert lines[0] == "vertex,table_words,max_tree_entries,label_words" and len(lines) == 4
    s = rep.summary()
    assert s["max_label_words"] == 2 and s["max_tree_entries"] >= 2
