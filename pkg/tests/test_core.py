import random

import pytest
from hypothesis import given, settings, strategies as st

from lcltrees.core import (BadEndpointCount, DegreeMismatch, EdgeViolation, Incomplete, KOutOfRange, Lcl,
                           MultiEdge, UnknownVertex, VertexViolation, build_path, build_star, contains,
                           edge_key, make_graph, multiset, neighborhood, verify_coloring)

from helpers import half_edge_graph, k_lcl, random_graph_edges, random_tree_edges


def test_single_vertex_graph():
    g = make_graph([0], [("e0", [0]), ("e1", [0]), ("e2", [0])], 3)
    assert g.degree(0) == 0
    assert not g.is_true("e1")


def test_one_true_edge():
    g = make_graph([0, 1], [("e0", [0, 1]), ("e1", [0]), ("e2", [0]), ("e3", [1]), ("e4", [1])], 3)
    assert g.degree(0) == g.degree(1) == 1
    assert g.other_end(0, "e0") == 1
    assert g.other_end(0, "e1") is None


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        make_graph([0], [("e0", [0]), ("e1", [0])], 3)


def test_other_construction_errors():
    with pytest.raises(BadEndpointCount):
        make_graph([0, 1, 2], [("e0", [0, 1, 2])], 2)
    with pytest.raises(UnknownVertex):
        make_graph([0], [("e0", [0, 7]), ("e1", [0])], 2)
    with pytest.raises(MultiEdge):
        make_graph([0, 1], [("e0", [0, 1]), ("e1", [1, 0])], 2)


def test_build_path_counts():
    g = build_path(3, 0)
    assert g.vertices == (0,) and len(g.edges) == 3
    g = build_path(3, 2)
    assert len(g.vertices) == 3
    assert len(g.true_edges()) == 2
    assert len(g.edges) - len(g.true_edges()) == 5
    g = build_path(2, 4)
    assert [g.degree(x) for x in g.vertices] == [1, 2, 2, 2, 1]
    assert len(g.edges) - len(g.true_edges()) == 2


def test_build_star():
    g = build_star(5, 3)
    assert g.degree(0) == 3 and all(g.degree(y) == 1 for y in (1, 2, 3))
    assert len(build_star(3, 0).edges) == 3
    g = build_star(3, 3)
    assert len(g.vertices) == 4 and g.degree(0) == 3
    with pytest.raises(KOutOfRange):
        build_star(3, 4)


@given(st.integers(2, 6), st.integers(0, 12))
def test_paths_and_stars_are_regular(delta, n):
    for g in (build_path(delta, n), build_star(delta, min(n, delta))):
        assert all(len(g.incident[x]) == delta for x in g.vertices)
        assert g.is_forest()


@settings(max_examples=50)
@given(st.integers(3, 30), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_truly_regular_incidence_count(n, delta, seed):
    rng = random.Random(seed)
    edges = random_graph_edges(rng, n, delta, 20 * n)
    g = half_edge_graph(n, edges, delta)
    halves = sum(len(g.incident[x]) for x in g.vertices)
    virtual = len(g.edges) - len(g.true_edges())
    assert halves == 2 * len(g.true_edges()) + virtual
    if virtual == 0:
        assert halves == 2 * len(g.edges)


def test_neighborhoods():
    g = build_path(2, 8)
    assert neighborhood(g, {0}, 0) == {0}
    assert neighborhood(g, {3}, 2) == {1, 2, 3, 4, 5}
    assert neighborhood(g, {0, 1}, 2) == {0, 1, 2, 3}
    with pytest.raises(UnknownVertex):
        neighborhood(g, {42}, 1)


def _vertex_values(g, values):
    return {(x, e): values[x] for x in g.vertices for e in g.incident[x]}


def test_verify_proper_coloring():
    lcl = k_lcl(3, 2)
    g = build_path(2, 2)
    ok = verify_coloring(g, lcl, _vertex_values(g, [0, 1, 0]))
    assert ok.ok and bool(ok)
    bad = verify_coloring(g, lcl, _vertex_values(g, [0, 0, 1]))
    assert bad.violations == (EdgeViolation("e0", (0, 0)),)


def test_verify_incomplete_and_vertex_violation():
    lcl = k_lcl(3, 2)
    g = build_path(2, 2)
    col = _vertex_values(g, [0, 1, 0])
    del col[1, "e0"]
    v = verify_coloring(g, lcl, col)
    assert any(isinstance(x, Incomplete) and x.half_edges == ((1, "e0"),) for x in v.violations)
    col = _vertex_values(g, [0, 1, 0])
    col[1, "e0"] = 2
    v = verify_coloring(g, lcl, col)
    assert VertexViolation(1, (1, 2)) in v.violations
    with pytest.raises(ValueError):
        verify_coloring(g, lcl, {**col, (0, "e1"): 0})


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_verify_is_order_insensitive(seed):
    rng = random.Random(seed)
    lcl = k_lcl(3, 3)
    n = rng.randint(1, 12)
    g = half_edge_graph(n, random_tree_edges(rng, n, 3), 3)
    col = {h: rng.randrange(3) for h in g.half_edges()}
    items = list(col.items())
    rng.shuffle(items)
    assert verify_coloring(g, lcl, col) == verify_coloring(g, lcl, dict(items))


def test_lcl_canonical_form():
    a = Lcl.from_names(2, ["x", "y"], [["y", "x"], ["x", "y"]], [["y", "x"]])
    b = Lcl.from_names(2, ["x", "y"], [["x", "y"]], [["x", "y"]])
    assert a == b
    assert a.partners[0] == frozenset({1})
    with pytest.raises(ValueError):
        Lcl.from_names(2, ["x"], [["x"]], [])
    with pytest.raises(ValueError):
        Lcl.from_names(2, ["x"], [["x", "z"]], [])


def test_small_helpers():
    assert multiset([2, 0, 1]) == (0, 1, 2)
    assert contains((0, 0, 1), (0, 0)) and not contains((0, 1), (0, 0))
    assert sorted(["e10", "e2", "e1"], key=edge_key) == ["e1", "e2", "e10"]


def test_induced_subgraph_turns_leaving_edges_virtual():
    g = build_path(2, 4)
    sub = g.induced({1, 2})
    assert sub.vertices == (1, 2)
    assert list(sub.true_edges()) == ["e1"]
    assert all(len(sub.incident[x]) == 2 for x in sub.vertices)
