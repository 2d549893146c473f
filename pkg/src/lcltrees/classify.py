"""Deciders for fullness and greediness, with certificates and bad witnesses.

Path extension is reduced to Boolean matrix powers.  A state is the label on
the forward half edge ``(x_i, x_{i+1})``; one internal vertex maps state ``s``
to state ``t`` iff some ``u`` has ``{s, u} ∈ ℰ`` and some allowed vertex
multiset contains ``{u, t}``.  A length-``L`` path with endpoint labels ``α``
(at ``x_0``) and ``β`` (at ``x_L``) extends iff row ``α`` of ``M^(L-1)`` meets
the partners of ``β``.  Powers of a Boolean matrix are eventually periodic, so
the set of good lengths is computed exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np

from .core import Lcl, Multiset, contains
from .treesolve import assign_star


class ClassifyError(ValueError):
    pass


class EmptySubset(ClassifyError):
    pass


class WitnessNotInSubset(ClassifyError):
    pass


class SubsetIsFull(ClassifyError):
    pass


class SetIsGreedy(ClassifyError):
    pass


class SubsetLimitExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# eventually periodic length sets


@dataclass(frozen=True)
class LengthSet:
    """Eventually periodic subset of ``{1, 2, 3, ...}`` (the *good* lengths).

    Lengths ``1..preperiod`` are read from ``good_prefix``; a length
    ``L > preperiod`` is good iff ``good_residues[(L - preperiod - 1) % period]``.
    """

    preperiod: int
    period: int
    good_prefix: tuple[bool, ...]
    good_residues: tuple[bool, ...]

    def __post_init__(self):
        if self.preperiod < 0 or self.period < 1:
            raise ValueError("need preperiod >= 0 and period >= 1")
        if len(self.good_prefix) != self.preperiod or len(self.good_residues) != self.period:
            raise ValueError("table sizes disagree with preperiod/period")

    def contains(self, length: int) -> bool:
        if length < 1:
            raise ValueError("lengths start at 1")
        if length <= self.preperiod:
            return self.good_prefix[length - 1]
        return self.good_residues[(length - self.preperiod - 1) % self.period]

    __contains__ = contains

    @property
    def bad_is_infinite(self) -> bool:
        return not all(self.good_residues)

    def all_good_from(self) -> int | None:
        """Least ``l >= 1`` with every ``L >= l`` good, or None."""
        if self.bad_is_infinite:
            return None
        for l in range(self.preperiod, 0, -1):
            if not self.good_prefix[l - 1]:
                return l + 1
        return 1

    def least_bad(self, at_least: int = 1) -> int | None:
        start = max(1, at_least)
        for length in range(start, start + self.preperiod + self.period + 1):
            if not self.contains(length):
                return length
        return None

    @classmethod
    def from_predicate(cls, good, preperiod: int, period: int) -> "LengthSet":
        """Build from a membership function known periodic beyond ``preperiod``; minimizes."""
        q = period
        for d in range(1, period + 1):
            if period % d == 0 and all(
                    good(preperiod + 1 + r) == good(preperiod + 1 + r % d) for r in range(period)):
                q = d
                break
        p = preperiod
        while p > 0 and good(p) == good(p + q):
            p -= 1
        return cls(p, q, tuple(good(L) for L in range(1, p + 1)),
                   tuple(good(p + 1 + r) for r in range(q)))


# ---------------------------------------------------------------------------
# transition matrices


@dataclass(frozen=True)
class TransitionMatrix:
    lcl: Lcl
    v_prime: tuple[Multiset, ...]
    bits: np.ndarray

    @cached_property
    def powers(self) -> tuple[list[np.ndarray], int]:
        """``([M^0, M^1, ..., M^(j-1)], i)`` where ``M^j == M^i`` is the first repeat."""
        seen: dict[bytes, int] = {}
        mats: list[np.ndarray] = []
        cur = np.eye(self.lcl.n_labels, dtype=bool)
        m = self.bits.astype(np.uint8)
        while True:
            key = cur.tobytes()
            if key in seen:
                return mats, seen[key]
            seen[key] = len(mats)
            mats.append(cur)
            cur = (cur.astype(np.uint8) @ m) > 0


def _check_subset(lcl: Lcl, v_prime: Iterable[Multiset]) -> tuple[Multiset, ...]:
    vp = tuple(sorted({tuple(sorted(v)) for v in v_prime}))
    if not vp:
        raise EmptySubset("V' must be nonempty")
    if not set(vp) <= lcl.vset:
        raise ValueError("V' must be a subset of the vertex constraints")
    return vp


def transition_matrix(lcl: Lcl, v_prime: Iterable[Multiset]) -> TransitionMatrix:
    vp = _check_subset(lcl, v_prime)
    n = lcl.n_labels
    # inner[u][t]: some v in V' contains {u, t}
    inner = np.zeros((n, n), dtype=bool)
    for u in range(n):
        for t in range(n):
            inner[u, t] = any(contains(v, (u, t)) for v in vp)
    bits = np.zeros((n, n), dtype=bool)
    for s in range(n):
        for u in lcl.partners[s]:
            bits[s] |= inner[u]
    return TransitionMatrix(lcl, vp, bits)


def _good_set(tm: TransitionMatrix, alpha: int, beta: int) -> LengthSet:
    mats, i = tm.powers
    accept = np.zeros(tm.lcl.n_labels, dtype=bool)
    accept[list(tm.lcl.partners[beta])] = True
    j = len(mats)

    def good(length: int) -> bool:
        k = length - 1
        if k >= j:
            k = i + (k - i) % (j - i)
        return bool((mats[k][alpha] & accept).any())

    # length L uses M^(L-1); M^k periodic for k >= i, i.e. L > i
    return LengthSet.from_predicate(good, i, j - i)


def good_lengths(lcl: Lcl, v_prime: Iterable[Multiset], a: Multiset, alpha: int,
                 b: Multiset, beta: int) -> LengthSet:
    """Lengths ``L`` for which the ``(a, α, b, β)``-precolored path extends inside ``V′``."""
    tm = transition_matrix(lcl, v_prime)
    a, b = tuple(sorted(a)), tuple(sorted(b))
    if a not in tm.v_prime or b not in tm.v_prime:
        raise WitnessNotInSubset("endpoint multisets must lie in V'")
    if alpha not in a or beta not in b:
        raise WitnessNotInSubset("alpha must occur in a and beta in b")
    return _good_set(tm, alpha, beta)


def _quadruples(vp: Sequence[Multiset]):
    for a in vp:
        for alpha in sorted(set(a)):
            for b in vp:
                for beta in sorted(set(b)):
                    yield a, alpha, b, beta


def minimal_full_length(lcl: Lcl, v_prime: Iterable[Multiset]) -> int | None:
    """Least ``l`` for which ``V′`` is l-full, or None if it never is."""
    tm = transition_matrix(lcl, v_prime)
    labels = sorted({s for v in tm.v_prime for s in v})
    worst = 1
    for alpha in labels:
        for beta in labels:
            l0 = _good_set(tm, alpha, beta).all_good_from()
            if l0 is None:
                return None
            worst = max(worst, l0)
    return worst


def is_l_full(lcl: Lcl, v_prime: Iterable[Multiset], l: int) -> bool:
    if l < 1:
        raise ValueError("l must be >= 1")
    l0 = minimal_full_length(lcl, v_prime)
    return l0 is not None and l0 <= l


@dataclass(frozen=True)
class FullnessCertificate:
    v_prime: tuple[Multiset, ...]
    l: int


@dataclass(frozen=True)
class BadPathWitness:
    a: Multiset
    alpha: int
    b: Multiset
    beta: int
    good: LengthSet

    def is_bad(self, length: int) -> bool:
        return not self.good.contains(length)


def _subsets(items: Sequence, min_size: int = 1):
    for size in range(min_size, len(items) + 1):
        yield from combinations(items, size)


def decide_fullness(lcl: Lcl, max_subsets: int | None = None) -> FullnessCertificate | None:
    """First ``V′`` (by size, then lexicographic) that is l-full for some l."""
    for n, vp in enumerate(_subsets(lcl.vertex_constraints)):
        if max_subsets is not None and n >= max_subsets:
            raise SubsetLimitExceeded(f"more than {max_subsets} subsets of V needed")
        l0 = minimal_full_length(lcl, vp)
        if l0 is not None:
            return FullnessCertificate(tuple(vp), l0)
    return None


def find_bad_path_witness(lcl: Lcl, v_prime: Iterable[Multiset]) -> BadPathWitness:
    tm = transition_matrix(lcl, v_prime)
    for a, alpha, b, beta in _quadruples(tm.v_prime):
        good = _good_set(tm, alpha, beta)
        if good.bad_is_infinite:
            return BadPathWitness(a, alpha, b, beta, good)
    raise SubsetIsFull("V' is l-full for some l; no bad quadruple exists")


# ---------------------------------------------------------------------------
# greediness


@dataclass(frozen=True)
class GreedyCertificate:
    sigma_prime: tuple[int, ...]


@dataclass(frozen=True)
class BadStarWitness:
    k: int
    alphas: tuple[int, ...]


def star_extends(lcl: Lcl, sigma_prime: Iterable[int], alphas: Sequence[int]) -> bool:
    """Whether the star with leaf labels ``alphas`` completes with ``Σ′`` on its virtual side."""
    sp = frozenset(sigma_prime)
    if not all(any(a in v for v in lcl.vertex_constraints) for a in alphas):
        return False
    slots = [lcl.partners[a] for a in alphas] + [sp] * (lcl.delta - len(alphas))
    return any(assign_star(slots, v) is not None for v in lcl.vertex_constraints)


def _first_bad_star(lcl: Lcl, sigma_prime: Iterable[int]) -> BadStarWitness | None:
    sp = sorted(set(sigma_prime))
    for k in range(lcl.delta + 1):
        for alphas in combinations_with_replacement(sp, k):
            if not star_extends(lcl, sp, alphas):
                return BadStarWitness(k, alphas)
    return None


def is_greedy_set(lcl: Lcl, sigma_prime: Iterable[int]) -> bool:
    return _first_bad_star(lcl, sigma_prime) is None


def decide_greediness(lcl: Lcl) -> GreedyCertificate | None:
    for sp in _subsets(tuple(range(lcl.n_labels))):
        if is_greedy_set(lcl, sp):
            return GreedyCertificate(tuple(sp))
    return None


def find_bad_star_witness(lcl: Lcl, sigma_prime: Iterable[int]) -> BadStarWitness:
    w = _first_bad_star(lcl, sigma_prime)
    if w is None:
        raise SetIsGreedy("sigma' is greedy; no bad star exists")
    return w
