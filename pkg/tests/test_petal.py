import math
import random

import pytest
from conftest import connected_graphs
from hypothesis import given
from hypothesis import strategies as st
from oracles import cone_petal, floyd_warshall

from ramsey.checks import observation_check, petal_checks
from ramsey.generate import generate
from ramsey.graph import SubgraphView, WeightedGraph, ball, dijkstra, radius
from ramsey.partition import MarkState
from ramsey.petal import (
    InfeasibleSelection, PetalProfile, cone_dist, create_petal, hierarchical_petal_decomposition,
    petal_decomposition, petal_levels, petal_set, run_from_root,
)


def _candidates(prof, mk, m, lo, hi, L, k):
    """Every (side, a, b, r) the selection rules may choose, in scan order, with feasibility."""
    def w(r):
        return prof.count(r, mk)

    R = hi - lo
    grid = [lo + R * s / (2 * L) for s in range(2 * L + 1)]
    grid[-1] = hi
    out = []
    if 2 * w(grid[L]) <= m:
        for i in range(L - 1):
            a, b = grid[L - i - 1], grid[L - i]
            for s in range(k):
                r = b - (s + 0.5) * (b - a) / k
                hi_r, lo_r = r + (b - a) / (2 * k), r - (b - a) / (2 * k)
                ok_ab = w(a) * m >= w(b) ** 2
                ok_r = w(hi_r) ** k * w(a) <= w(lo_r) ** k * w(b)
                out.append(("forward", a, b, r, ok_ab, ok_r))
    return out


class TestConeAndPetal:
    def test_cone_examples(self, p3):
        v = SubgraphView(p3)
        assert cone_dist(v, 1, 1, 0, 2) == 0
        assert cone_dist(v, 0, 2, 1, 1) == 0
        assert cone_dist(v, 0, 2, 0, 2) == 4

    def test_petal_examples(self, p3):
        v = SubgraphView(p3)
        assert petal_set(v, 0, 2, 0) == {2}
        assert 2 in petal_set(v, 0, 2, 0)
        assert PetalProfile(v, 0, 2).petal(0) == {2}

    def test_monotone_on_random_instances(self):
        rng = random.Random(11)
        for trial in range(100):
            g = generate("random", rng.randint(2, 14), trial)
            v = SubgraphView(g)
            x0, t = rng.randrange(g.n), rng.randrange(g.n)
            r1, r2 = sorted(rng.uniform(0, 150) for _ in range(2))
            assert petal_set(v, x0, t, r1) <= petal_set(v, x0, t, r2)

    @given(connected_graphs(min_n=2, max_n=10), st.data())
    def test_profile_equals_definition(self, g, data):
        members = data.draw(st.sets(st.integers(0, g.n - 1), min_size=2))
        v = SubgraphView(g, members)
        if radius(v, min(members)) == math.inf:
            return
        x0 = data.draw(st.sampled_from(sorted(members)))
        t = data.draw(st.sampled_from(sorted(members)))
        prof = PetalProfile(v, x0, t)
        fw = floyd_warshall(g.n, g.edges(), members)
        for r in sorted(set(prof.entry.tolist())) + [0.0, 0.75, 3.5]:
            want = petal_set(v, x0, t, r)
            assert prof.petal(r) == want == cone_petal(fw, prof.path, t, r, members)

    @given(connected_graphs(min_n=2, max_n=10), st.data())
    def test_ball_growth(self, g, data):
        v = SubgraphView(g)
        x0, t = data.draw(st.integers(0, g.n - 1)), data.draw(st.integers(0, g.n - 1))
        r = data.draw(st.floats(0, 40))
        l = data.draw(st.floats(0, 10))
        W = petal_set(v, x0, t, r)
        big = petal_set(v, x0, t, r + 4 * l)
        for y in W:
            assert ball(v, y, l) <= big

    def test_petal_levels(self):
        assert [petal_levels(m) for m in (0, 1, 2, 3, 4, 5, 16, 17, 256, 257)] == [1, 1, 2, 2, 2, 3, 3, 4, 4, 5]
        for m in range(3, 300):
            assert petal_levels(m) == math.ceil(1 + math.log2(math.log2(m)) - 1e-12)


class TestCreatePetal:
    def test_no_marked_is_trivial(self, p3):
        marks = MarkState([])
        cut = create_petal(SubgraphView(p3), 0.0, 1.0, 0, 2, marks, 2)
        assert cut.side == "trivial-forward" and cut.r == 0.25 and cut.unmarked == ()

    def test_constant_w_takes_first_radius(self):
        # only t is inside any petal of the window, so w is constant and the first radius passes
        g = WeightedGraph(6, [(0, 1, 1), (1, 2, 1), (0, 3, 100), (0, 4, 100), (0, 5, 100)])
        marks = MarkState([2, 3, 4, 5])
        k = 3
        cut = create_petal(SubgraphView(g), 0.0, 1.0, 0, 2, marks, k)
        assert cut.side == "forward" and cut.m == 4 and cut.L == 2
        a, b = cut.interval
        assert (a, b) == (0.25, 0.5)
        assert cut.r == b - (b - a) / (2 * k)
        assert cut.unmarked == ()

    def test_m_two_is_feasible(self):
        # t is marked and one far vertex is marked: a single grid level leaves no forward interval
        g = WeightedGraph(4, [(0, 1, 1), (1, 2, 1), (0, 3, 100)])
        cut = create_petal(SubgraphView(g), 0.0, 1.0, 0, 2, MarkState([2, 3]), 2)
        assert cut.L == 2 and cut.side == "forward" and cut.interval == (0.25, 0.5)

    @given(connected_graphs(min_n=3, max_n=11), st.integers(1, 4), st.data())
    def test_selection_satisfies_growth_inequalities(self, g, k, data):
        v = SubgraphView(g)
        x0 = data.draw(st.integers(0, g.n - 1))
        t = data.draw(st.integers(0, g.n - 1).filter(lambda z: z != x0))
        d = dijkstra(v, x0)[t]
        lo = data.draw(st.floats(0, d * 0.9))
        hi = data.draw(st.floats(lo + 0.5, lo + 0.5 + d))
        marked = data.draw(st.sets(st.integers(0, g.n - 1)))
        marks = MarkState(marked)
        prof = PetalProfile(v, x0, t)
        mk = marks.mask(prof.nodes)
        cut = create_petal(v, lo, hi, x0, t, marks, k, prof)
        m, L = cut.m, cut.L
        assert m == len(marked)
        assert lo <= cut.r <= hi
        assert cut.petal == petal_set(v, x0, t, cut.r)

        def w(r):
            return len(petal_set(v, x0, t, r) & marked)

        R = hi - lo
        width = R / (4 * L * k)
        if cut.side == "forward":
            a, b = cut.interval
            assert lo <= a < b <= lo + R / 2 + 1e-12 and math.isclose(b - a, R / (2 * L))
            assert w(a) * m >= w(b) ** 2
            assert w(cut.r + width) ** k * w(a) <= w(cut.r - width) ** k * w(b)
            # first feasible candidate in scan order wins
            cands = _candidates(prof, mk, m, lo, hi, L, k)
            feasible = [c for c in cands if c[4]]
            first_ab = feasible[0][1:3]
            assert (a, b) == first_ab
            first_r = next(c[3] for c in feasible if c[1:3] == first_ab and c[5])
            assert cut.r == first_r
        elif cut.side == "backward":
            a, b = cut.interval

            def q(r):
                return m - w(r)

            assert lo + R / 2 - 1e-12 <= b < a <= hi and math.isclose(a - b, R / (2 * L))
            assert q(a) * m >= q(b) ** 2
            assert q(cut.r - width) ** k * q(a) <= q(cut.r + width) ** k * q(b)
        elif cut.side == "trivial-forward":
            assert w(lo + R / (2 * L)) == 0 and cut.r == lo + R / (4 * L)
        else:
            assert m - w(hi - R / (2 * L)) == 0 and cut.r == hi - R / (4 * L)
        ring = (petal_set(v, x0, t, cut.r + width) - petal_set(v, x0, t, cut.r - width)) & marked
        assert set(cut.unmarked) == ring
        assert marks.marked == marked - ring

    def test_empty_range_rejected(self, p3):
        with pytest.raises(ValueError):
            create_petal(SubgraphView(p3), 1.0, 1.0, 0, 2, MarkState([]), 2)

    def test_infeasible_is_an_assertion(self):
        assert issubclass(InfeasibleSelection, AssertionError)


class TestDecomposition:
    def test_no_petals(self, p3):
        rec = petal_decomposition(SubgraphView(p3), 1, 1, 2.0, MarkState(range(3)), 2)
        assert len(rec.parts) == 1 and rec.parts[0].members == {0, 1, 2} and rec.parts[0].target == 1

    def test_first_petal(self, p3):
        rec = petal_decomposition(SubgraphView(p3), 0, 2, 2.0, MarkState(range(3)), 2)
        y1, x1 = rec.edges[0]
        assert rec.parts[0].target == y1 and rec.parts[1].target == 2
        assert rec.cuts[0].lo == 1.0 and rec.cuts[0].hi == 1.5
        assert not rec.halved

    @given(connected_graphs(min_n=2, max_n=12), st.integers(1, 3), st.data())
    def test_parts_and_crossings(self, g, k, data):
        x0 = data.draw(st.integers(0, g.n - 1))
        v = SubgraphView(g)
        delta = radius(v, x0)
        rec = petal_decomposition(v, x0, x0, delta, MarkState(range(g.n)), k)
        seen = [u for p in rec.parts for u in p.members]
        assert sorted(seen) == list(range(g.n))
        for p in rec.parts:
            assert p.delta <= 0.75 * delta * (1 + 1e-9)
            assert p.center in p.members and p.target in p.members
        for (y, x), p in zip(rec.edges, rec.parts[1:]):
            assert x == p.center and y not in p.members
            assert g.edge_index(x, y) >= 0

    @given(connected_graphs(min_n=2, max_n=12), st.integers(1, 3), st.data())
    def test_observation(self, g, k, data):
        x0 = data.draw(st.integers(0, g.n - 1))
        t = data.draw(st.integers(0, g.n - 1))
        delta = radius(SubgraphView(g), x0)
        marked = data.draw(st.sets(st.integers(0, g.n - 1)))
        assert observation_check(g, x0, t, delta, marked, k).ok


class TestHierarchical:
    def test_single_vertex(self):
        g = WeightedGraph(1, [])
        for marked in ([0], []):
            run = hierarchical_petal_decomposition(SubgraphView(g), 0, 0, 0.0, MarkState(marked), 2)
            assert run.tree.edges == [] and run.survivors == set(marked)

    def test_p3(self, p3):
        run = run_from_root(p3, MarkState(range(3)), 2)
        assert run.tree.edges == [(0, 1), (1, 2)]
        assert max(run.tree.distances_from(0).values()) <= 4 * 2

    def test_subset_view(self):
        g = generate("random", 20, 3)
        members = sorted(run_from_root(g, MarkState(range(20)), 2).clusters[1].members)
        v = SubgraphView(g, members)
        run = hierarchical_petal_decomposition(v, members[0], members[0], radius(v, members[0]),
                                               MarkState(members), 2)
        assert len(run.tree.edges) == len(members) - 1

    @given(connected_graphs(min_n=2, max_n=14), st.integers(1, 4), st.data())
    def test_all_guarantees(self, g, k, data):
        marked = data.draw(st.sets(st.integers(0, g.n - 1)))
        run = run_from_root(g, MarkState(marked), k)
        failed = [c for c in petal_checks(run, g) if not c.ok]
        assert failed == []

    def test_trace_records(self):
        g = generate("grid", 36, 0)
        run = run_from_root(g, MarkState(range(36)), 2)
        tr = run.trace()
        assert tr and set(tr[0]) >= {"level", "center", "target", "range", "branch", "r"}
        assert all(t["range"][0] <= t["r"] <= t["range"][1] for t in tr)

    @pytest.mark.parametrize("family,n,k", [("random", 128, 2), ("grid", 144, 1), ("path", 100, 2)])
    def test_larger_graphs(self, family, n, k):
        g = generate(family, n, 5)
        run = run_from_root(g, MarkState(range(n)), k)
        assert [c.name for c in petal_checks(run, g) if not c.ok] == []
