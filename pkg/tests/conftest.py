import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from ramsey.graph import WeightedGraph  # noqa: E402

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def connected_graphs(draw, min_n=1, max_n=10, max_w=10, dyadic=False):
    """Random connected graphs: a random tree plus extra edges."""
    n = draw(st.integers(min_n, max_n))
    weight = st.integers(1, max_w)
    if dyadic:
        weight = st.sampled_from([1, 1.5, 2, 2.5, 3, 4, 6.25])
    edges = {}
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges[(u, v)] = draw(weight)
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), weight), max_size=2 * n))
    for u, v, w in extra:
        if u != v:
            edges.setdefault((min(u, v), max(u, v)), w)
    return WeightedGraph(n, [(u, v, w) for (u, v), w in edges.items()])


@pytest.fixture
def p3():
    return WeightedGraph(3, [(0, 1, 1), (1, 2, 1)])


@pytest.fixture
def triangle():
    return WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)])


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
