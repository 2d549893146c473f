import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcltrees.classify import (EmptySubset, LengthSet, SetIsGreedy, SubsetIsFull, SubsetLimitExceeded,
                               WitnessNotInSubset, decide_fullness, decide_greediness, find_bad_path_witness,
                               find_bad_star_witness, good_lengths, is_greedy_set, is_l_full,
                               minimal_full_length, star_extends, transition_matrix)
from lcltrees.core import Lcl, build_path
from lcltrees.treesolve import CompletionQuery, complete

from helpers import (brute_is_greedy, brute_star_ok, corpus, h2_lcl, k_lcl, matching_lcl, nonempty_subsets,
                     path_extends, quadruples, random_lcl)


def test_transition_matrices():
    k3 = k_lcl(3, 2)
    assert (transition_matrix(k3, k3.vertex_constraints).bits == ~np.eye(3, dtype=bool)).all()
    k2 = k_lcl(2, 2)
    assert transition_matrix(k2, k2.vertex_constraints).bits.tolist() == [[False, True], [True, False]]
    empty = Lcl.from_names(2, ["a", "b"], [["a", "b"]], [])
    assert not transition_matrix(empty, empty.vertex_constraints).bits.any()
    with pytest.raises(EmptySubset):
        transition_matrix(k3, [])


def test_good_length_examples():
    k3 = k_lcl(3, 2)
    vp = k3.vertex_constraints
    same = good_lengths(k3, vp, (0, 0), 0, (0, 0), 0)
    assert [L in same for L in range(1, 12)] == [False] + [True] * 10
    assert same.all_good_from() == 2
    diff = good_lengths(k3, vp, (0, 0), 0, (1, 1), 1)
    assert diff.all_good_from() == 1
    k2 = k_lcl(2, 2)
    par = good_lengths(k2, k2.vertex_constraints, (0, 0), 0, (0, 0), 0)
    assert [L in par for L in range(1, 12)] == [L % 2 == 0 for L in range(1, 12)]
    assert par.bad_is_infinite
    with pytest.raises(WitnessNotInSubset):
        good_lengths(k3, [(0, 0)], (1, 1), 1, (0, 0), 0)
    with pytest.raises(WitnessNotInSubset):
        good_lengths(k3, vp, (0, 0), 1, (0, 0), 0)


def test_is_l_full_examples():
    k3 = k_lcl(3, 2)
    assert is_l_full(k3, k3.vertex_constraints, 2)
    assert not is_l_full(k3, k3.vertex_constraints, 1)
    k2 = k_lcl(2, 2)
    assert not any(is_l_full(k2, k2.vertex_constraints, l) for l in range(1, 30))


def test_decide_fullness_examples():
    k3 = k_lcl(3, 2)
    cert = decide_fullness(k3)
    assert cert.v_prime == k3.vertex_constraints and cert.l == 2
    assert decide_fullness(k_lcl(2, 2)) is None
    assert decide_fullness(matching_lcl()) is None
    with pytest.raises(SubsetLimitExceeded):
        decide_fullness(k3, max_subsets=3)


def test_h2_minimal_length_is_four():
    # C_5 has closed walks of lengths 2 and 4 but not 3
    h2 = h2_lcl()
    cert = decide_fullness(h2)
    assert cert.v_prime == h2.vertex_constraints
    assert cert.l == 4
    v0 = (0, 0)
    assert not path_extends(h2, h2.vertex_constraints, v0, 0, v0, 0, 3)
    assert all(path_extends(h2, h2.vertex_constraints, *q, L)
               for q in quadruples(h2.vertex_constraints) for L in range(4, 11))


def _bad_path_is_really_bad(lcl, vp, w, length):
    g = build_path(lcl.delta, length)
    partial = {}
    for x, m, lab, edge in ((0, w.a, w.alpha, "e0"), (length, w.b, w.beta, f"e{length - 1}")):
        rest = list(m)
        rest.remove(lab)
        partial[x, edge] = lab
        for e, s in zip([e for e in g.incident[x] if e != edge], rest):
            partial[x, e] = s
    return complete(CompletionQuery(g, lcl, partial, vp)) is None


def test_bad_path_witness_examples():
    k2 = k_lcl(2, 2)
    w = find_bad_path_witness(k2, k2.vertex_constraints)
    assert (w.a, w.alpha, w.b, w.beta) == ((0, 0), 0, (0, 0), 0)
    assert [w.is_bad(L) for L in range(1, 10)] == [L % 2 == 1 for L in range(1, 10)]
    w1 = find_bad_path_witness(k2, [(0, 0)])
    assert (w1.a, w1.alpha, w1.b, w1.beta) == ((0, 0), 0, (0, 0), 0)
    pm = matching_lcl()
    wp = find_bad_path_witness(pm, pm.vertex_constraints)
    assert wp.good.bad_is_infinite
    bad = [L for L in range(1, 16) if wp.is_bad(L)]
    assert bad and all(_bad_path_is_really_bad(pm, pm.vertex_constraints, wp, L) for L in bad)
    with pytest.raises(SubsetIsFull):
        find_bad_path_witness(k_lcl(3, 2), k_lcl(3, 2).vertex_constraints)


@pytest.mark.parametrize("name,lcl", corpus())
def test_witnesses_agree_with_path_oracle(name, lcl):
    for vp in nonempty_subsets(lcl.vertex_constraints):
        if minimal_full_length(lcl, vp) is not None:
            continue
        w = find_bad_path_witness(lcl, vp)
        for L in range(1, 9):
            assert path_extends(lcl, vp, w.a, w.alpha, w.b, w.beta, L) == (not w.is_bad(L))


def test_greedy_examples():
    k4 = k_lcl(4, 3)
    assert is_greedy_set(k4, range(4))
    assert not is_greedy_set(k_lcl(3, 3), range(3))
    assert not is_greedy_set(k4, [])
    assert decide_greediness(h2_lcl()) is None
    assert decide_greediness(k_lcl(3, 2)) is not None
    # size-then-lex enumeration stops at Δ clique labels; the whole clique is greedy too
    assert decide_greediness(k4).sigma_prime == (0, 1, 2)
    assert decide_greediness(k_lcl(3, 2)).sigma_prime == (0, 1)
    assert is_greedy_set(k_lcl(3, 2), range(3))


def test_bad_star_witness_examples():
    k3 = k_lcl(3, 3)
    w = find_bad_star_witness(k3, range(3))
    assert (w.k, w.alphas) == (3, (0, 1, 2))
    h2 = h2_lcl()
    w = find_bad_star_witness(h2, [0])
    assert not star_extends(h2, [0], w.alphas)
    assert not brute_star_ok(h2, [0], w.alphas)
    nothing = Lcl.from_names(2, ["a"], [], [])
    w = find_bad_star_witness(nothing, [0])
    assert (w.k, w.alphas) == (0, ())
    with pytest.raises(SetIsGreedy):
        find_bad_star_witness(k_lcl(4, 3), range(4))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]), st.sampled_from([2, 3]))
def test_greedy_sets_match_brute_force(seed, delta, n_labels):
    rng = random.Random(seed)
    lcl = random_lcl(rng, delta, n_labels)
    sp = sorted(rng.sample(range(n_labels), rng.randint(1, n_labels)))
    assert is_greedy_set(lcl, sp) == brute_is_greedy(lcl, sp)
    if not is_greedy_set(lcl, sp):
        w = find_bad_star_witness(lcl, sp)
        assert not brute_star_ok(lcl, sp, w.alphas)


@settings(max_examples=200)
@given(st.lists(st.booleans(), min_size=0, max_size=6), st.lists(st.booleans(), min_size=1, max_size=6))
def test_length_set_normal_form(prefix, cycle):
    def good(L):
        return prefix[L - 1] if L <= len(prefix) else cycle[(L - len(prefix) - 1) % len(cycle)]

    ls = LengthSet.from_predicate(good, len(prefix), len(cycle))
    assert all(ls.contains(L) == good(L) for L in range(1, 60))
    assert ls.period <= len(cycle) and ls.preperiod <= len(prefix)
    first_bad = next((L for L in range(1, 60) if not good(L)), None)
    assert ls.least_bad() == first_bad
    start = ls.all_good_from()
    if start is None:
        assert ls.bad_is_infinite
    else:
        assert all(good(L) for L in range(start, 60)) and (start == 1 or not good(start - 1))
