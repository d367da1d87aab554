import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import DATA
from oracles import all_extended_diagrams
from k3fib.dynkin import (
    DualGraph,
    count_fibrations,
    fiber_class,
    fiber_products,
    find_extended_diagrams,
    graph_from_json,
)
from k3fib.errors import GraphTooLarge, InconsistentGrouping, LatticeError, NotSymmetric

TRIANGLE = [(0, 1), (1, 2), (0, 2)]


def _kinds(G):
    return [(d.kind, d.vertices) for d in find_extended_diagrams(G)]


def load(name):
    return graph_from_json(json.loads((DATA / "graphs" / f"{name}.json").read_text()))


def test_find_examples():
    assert _kinds(DualGraph.from_edges(3, TRIANGLE)) == [("A~2", (0, 1, 2))]
    assert _kinds(DualGraph.from_edges(2, [(0, 1, 2)])) == [("A~1", (0, 1))]
    square = DualGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert _kinds(square) == [("A~3", (0, 1, 2, 3))]


def test_fiber_class_examples():
    for G, F in ((DualGraph.from_edges(2, [(0, 1, 2)]), [1, 1]),
                 (DualGraph.from_edges(3, TRIANGLE), [1, 1, 1]),
                 (DualGraph.from_edges(5, [(4, 0), (4, 1), (4, 2), (4, 3)]), [1, 1, 1, 1, 2])):
        (D,) = find_extended_diagrams(G)
        assert fiber_class(G, D) == F
        assert G.dot(F, F) == 0


def test_exceptional_templates():
    # E~8: arms 1, 2, 5 from the branch vertex 0
    e8 = [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7), (7, 8)]
    (D,) = find_extended_diagrams(DualGraph.from_edges(9, e8))
    assert D.kind == "E~8" and max(D.multiplicities) == 6
    e6 = [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]
    (D,) = find_extended_diagrams(DualGraph.from_edges(7, e6))
    assert D.kind == "E~6" and sorted(D.multiplicities) == [1, 1, 1, 2, 2, 2, 3]
    e7 = [(0, 1), (0, 2), (2, 3), (3, 4), (0, 5), (5, 6), (6, 7)]
    assert [d.kind for d in find_extended_diagrams(DualGraph.from_edges(8, e7))] == ["E~7"]
    d5 = [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)]
    (D,) = find_extended_diagrams(DualGraph.from_edges(6, d5))
    assert D.kind == "D~5" and sorted(D.multiplicities) == [1, 1, 1, 1, 2, 2]


def test_heavy_edges_never_match():
    assert find_extended_diagrams(DualGraph.from_edges(2, [(0, 1, 3)])) == []
    # a triangle with one weight-3 side is no cycle template
    assert find_extended_diagrams(DualGraph.from_edges(3, [(0, 1, 3), (1, 2), (0, 2)])) == []


def test_count_examples():
    assert count_fibrations(load("two-A2-one-A3"))[0] == 3
    assert count_fibrations(load("three-A1"))[0] == 1
    # triangle 0-1-2, pair 3=4 doubled, one unit edge 2-3
    G = DualGraph.from_edges(5, TRIANGLE + [(3, 4, 2), (2, 3)])
    count, groups = count_fibrations(G)
    assert count == 2
    assert fiber_products(G)[0][1] == 1


def test_fixture_graph_structure():
    G = load("two-A2-one-A3")
    assert sorted(d.kind for d in find_extended_diagrams(G)) == ["A~2", "A~2", "A~3"]
    P = fiber_products(G)
    assert all(P[i][j] == 2 for i in range(3) for j in range(3) if i != j)
    G = load("three-A1")
    assert [d.kind for d in find_extended_diagrams(G)] == ["A~1"] * 3
    assert all(x == 0 for row in fiber_products(G) for x in row)


def test_fixture_graphs_match_oracle():
    for name in ("two-A2-one-A3", "three-A1"):
        G = load(name)
        ours = [(d.kind, d.vertices) for d in find_extended_diagrams(G)]
        assert ours == all_extended_diagrams([list(r) for r in G.weights])


def test_inconsistent_grouping():
    # A~1 pairs F1={0,1}, F2={2,3}, F3={4,5}: F1.F2 = F2.F3 = 0 but F1.F3 = 1
    G = DualGraph.from_edges(6, [(0, 1, 2), (2, 3, 2), (4, 5, 2), (0, 4)])
    P = fiber_products(G)
    assert P[0][1] == 0 and P[1][2] == 0 and P[0][2] == 1
    with pytest.raises(InconsistentGrouping):
        count_fibrations(G)


def test_validation():
    with pytest.raises(LatticeError):
        DualGraph.make(["a", "b"], [[-2, 1], [1, 0]])
    with pytest.raises(NotSymmetric):
        DualGraph.make(["a", "b"], [[-2, 1], [0, -2]])
    with pytest.raises(LatticeError):
        DualGraph.make(["a", "b"], [[-2, -1], [-1, -2]])
    with pytest.raises(GraphTooLarge):
        find_extended_diagrams(DualGraph.from_edges(25, []))


# --- properties -------------------------------------------------------------

TEMPLATES = {
    "A~1": (2, [(0, 1, 2)]),
    "A~2": (3, TRIANGLE),
    "A~3": (4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    "A~4": (5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
    "D~4": (5, [(4, 0), (4, 1), (4, 2), (4, 3)]),
    "D~5": (6, [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)]),
    "E~6": (7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]),
}


@given(st.lists(st.sampled_from(sorted(TEMPLATES)), min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_disjoint_union_of_templates_is_one_fibration(names):
    edges, off = [], 0
    for nm in names:
        n, es = TEMPLATES[nm]
        edges += [(a + off, b + off, *rest) for a, b, *rest in es]
        off += n
    G = DualGraph.from_edges(off, edges)
    ds = find_extended_diagrams(G)
    assert sorted(d.kind for d in ds) == sorted(names)
    assert count_fibrations(G)[0] == 1


@given(st.integers(3, 8), st.data())
@settings(max_examples=60, deadline=None)
def test_random_graphs_match_subset_oracle(n, data):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    ws = data.draw(st.lists(st.sampled_from([0, 0, 1, 1, 2]), min_size=len(pairs), max_size=len(pairs)))
    G = DualGraph.from_edges(n, [(i, j, w) for (i, j), w in zip(pairs, ws) if w])
    ds = find_extended_diagrams(G)
    assert [(d.kind, d.vertices) for d in ds] == all_extended_diagrams([list(r) for r in G.weights])
    for d in ds:
        F = fiber_class(G, d)
        assert G.dot(F, F) == 0
        assert all(G.dot(F, [int(i == v) for i in range(n)]) == 0 for v in d.vertices)
    try:
        count, groups = count_fibrations(G)
    except InconsistentGrouping:
        return
    P = fiber_products(G)
    for g in groups:
        assert all(P[i][j] == 0 for i in g for j in g)
    for g, h in zip(groups, groups[1:]):
        assert all(P[i][j] > 0 for i in g for j in h)
