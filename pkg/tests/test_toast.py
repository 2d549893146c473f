import random

import pytest
from hypothesis import given, settings, strategies as st

from lcltrees.core import build_path, make_graph
from lcltrees.toast import (DisconnectedPiece, SeparationViolation, UncoveredPair, build_toast, verify_toast)

from helpers import half_edge_graph, random_forest_edges, random_tree_edges


def test_path_golden_pieces():
    t = build_toast(build_path(2, 8), 2)
    assert [sorted(p.vertices) for p in t.pieces] == [[0, 1], [0, 1, 2, 3], list(range(7)), list(range(9))]
    assert [p.stage for p in t.pieces] == [0, 1, 3, 6]


def test_single_vertex():
    for l in (0, 1, 5):
        t = build_toast(build_path(3, 0), l)
        assert t.sets() == [frozenset({0})]


def test_pieces_stay_in_components():
    g = half_edge_graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)], 2)
    t = build_toast(g, 1)
    comps = [set(c) for c in g.components()]
    assert all(any(p.vertices <= c for c in comps) for p in t.pieces)
    assert verify_toast(g, 1, t.sets()).ok


def test_verifier_catches_violations():
    g = build_path(2, 3)
    v = verify_toast(g, 2, [{0, 1}, {2, 3}])
    assert any(isinstance(x, SeparationViolation) and x.distance == 1 for x in v.violations)
    v = verify_toast(build_path(2, 1), 1, [{0}])
    assert UncoveredPair(0, 1) in v.violations
    v = verify_toast(g, 1, [{0, 2}, {0, 1, 2, 3}])
    assert DisconnectedPiece(0) in v.violations


def test_rejects_bad_stream_order():
    with pytest.raises(ValueError):
        build_toast(build_path(2, 3), 1, [0, 1, 2])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0, 1, 2, 4]))
def test_random_forests_in_random_stream_order(seed, l):
    rng = random.Random(seed)
    n = rng.randint(1, 120)
    delta = rng.choice([2, 3, 4])
    g = half_edge_graph(n, random_forest_edges(rng, n, delta), delta, rng)
    order = list(g.vertices)
    rng.shuffle(order)
    t = build_toast(g, l, order)
    assert verify_toast(g, l, t.sets()).ok
    assert sorted(p.stage for p in t.pieces) == [p.stage for p in t.pieces]


def test_deterministic():
    rng = random.Random(5)
    g = half_edge_graph(80, random_tree_edges(rng, 80, 3), 3)
    assert build_toast(g, 2) == build_toast(g, 2)
