import itertools
from collections import Counter
from math import factorial

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from distpart.hypercore import LabeledHypergraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def brute_group_order(h: LabeledHypergraph) -> int:
    """|aut(h)| by trying every vertex permutation; parallel edges add a factorial each."""
    target = Counter(h.edges)
    count = 0
    for perm in itertools.permutations(range(h.n_vertices)):
        if any(h.labels[perm[v]] != h.labels[v] for v in h.vertices):
            continue
        image = Counter(tuple(sorted(perm[v] for v in e)) for e in h.edges)
        if image == target:
            count += 1
    mult = 1
    for m in target.values():
        mult *= factorial(m)
    return count * mult


@st.composite
def small_hypergraphs(draw, max_vertices=6, max_edges=5, m2=None, uniform=None):
    n = draw(st.integers(uniform or 1, max(max_vertices, uniform or 1)))
    m2 = draw(st.integers(0, 2)) if m2 is None else m2
    k = draw(st.integers(0, max_edges))
    edges = []
    for _ in range(k):
        size = uniform if uniform is not None else draw(st.integers(1, n))
        edges.append(tuple(draw(st.permutations(range(n)))[:size]))
    if m2 == 0:
        labels = (None,) * n
    else:
        subsets = [tuple(x for x in range(1, m2 + 1) if mask >> (x - 1) & 1) for mask in range(2 ** m2)]
        labels = tuple(draw(st.sampled_from(subsets)) for _ in range(n))
    return LabeledHypergraph(labels, tuple(edges), m2)


@st.composite
def random_trees(draw, n1=None, max_edges=6):
    """Uniform hypertrees grown by attaching each new edge at one existing vertex."""
    n1 = draw(st.integers(2, 4)) if n1 is None else n1
    t = draw(st.integers(1, max_edges))
    edges = [tuple(range(n1))]
    n = n1
    for _ in range(t - 1):
        v = draw(st.integers(0, n - 1))
        edges.append((v,) + tuple(range(n, n + n1 - 1)))
        n += n1 - 1
    return LabeledHypergraph.unlabeled(n, edges)


@pytest.fixture
def path3():
    return LabeledHypergraph.unlabeled(3, [(0, 1), (1, 2)])


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
