"""Online construction and validation of l-toasts.

The builder scans vertices in stream order.  At vertex ``n`` it does nothing if
some existing piece already contains ``B(n, 1)``; otherwise it adds ``B(n, r)``
for the least ``r > 0`` that keeps every pair of pieces either nested with an
``l``-buffer or more than ``l`` apart.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import HalfEdgeGraph, Verdict, distances_from, neighborhood


@dataclass(frozen=True)
class Piece:
    id: int
    vertices: frozenset[int]
    stage: int


@dataclass(frozen=True)
class Toast:
    l: int
    pieces: tuple[Piece, ...]

    def sets(self) -> list[frozenset[int]]:
        return [p.vertices for p in self.pieces]


@dataclass(frozen=True)
class EmptyPiece:
    piece: int


@dataclass(frozen=True)
class DisconnectedPiece:
    piece: int


@dataclass(frozen=True)
class SeparationViolation:
    first: int
    second: int
    distance: int


@dataclass(frozen=True)
class UncoveredPair:
    x: int
    y: int


def _compatible(c: frozenset, ball_c: frozenset, d: frozenset, ball_d: frozenset) -> bool:
    return ball_c <= d or ball_d <= c or c.isdisjoint(ball_d)


def build_toast(graph: HalfEdgeGraph, l: int, stream_order: Sequence[int] | None = None) -> Toast:
    if l < 0:
        raise ValueError("l must be >= 0")
    order = list(graph.vertices) if stream_order is None else list(stream_order)
    if sorted(order) != list(graph.vertices):
        raise ValueError("stream_order must be a permutation of the vertices")
    pieces: list[Piece] = []
    balls: list[frozenset[int]] = []  # B(piece, l), kept alongside each piece
    for stage, n in enumerate(order):
        b1 = neighborhood(graph, [n], 1)
        if any(b1 <= p.vertices for p in pieces):
            continue
        dist = distances_from(graph, [n])
        reach = max(dist.values())
        r = 1
        while True:
            cand = frozenset(x for x, d in dist.items() if d <= r)
            ball = frozenset(neighborhood(graph, cand, l))
            if all(_compatible(cand, ball, p.vertices, bp) for p, bp in zip(pieces, balls)):
                break
            # a saturated ball is the whole component and always compatible
            assert r <= reach, "least-radius search failed to terminate"
            r += 1
        pieces.append(Piece(len(pieces), cand, stage))
        balls.append(ball)
    return Toast(l, tuple(pieces))


def verify_toast(graph: HalfEdgeGraph, l: int, pieces: Iterable[Iterable[int]]) -> Verdict:
    """Check nonemptiness, connectivity and both toast conditions exhaustively."""
    sets = [frozenset(p) for p in pieces]
    violations: list = []
    for i, p in enumerate(sets):
        if not p:
            violations.append(EmptyPiece(i))
            continue
        start = next(iter(p))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in graph.adjacency[u]:
                if w in p and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != p:
            violations.append(DisconnectedPiece(i))

    dists = [distances_from(graph, p) if p else {} for p in sets]
    balls = [frozenset(x for x, d in dm.items() if d <= l) for dm in dists]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            c, d = sets[i], sets[j]
            if not c or not d:
                continue
            if balls[i] <= d or balls[j] <= c:
                continue
            gap = min((dists[i][x] for x in d if x in dists[i]), default=None)
            if gap is not None and gap <= l:
                violations.append(SeparationViolation(i, j, gap))

    # condition (2): co-membership must cover every same-component pair
    index = {x: k for k, x in enumerate(graph.vertices)}
    nv = len(index)
    member = np.zeros((len(sets), nv), dtype=np.uint8)
    for i, p in enumerate(sets):
        for x in p:
            member[i, index[x]] = 1
    together = (member.T.astype(np.int32) @ member.astype(np.int32)) > 0
    comp = np.empty(nv, dtype=np.int64)
    for k, cc in enumerate(graph.components()):
        for x in cc:
            comp[index[x]] = k
    same = comp[:, None] == comp[None, :]
    bad = np.argwhere(same & ~together)
    for a, b in bad:
        if a <= b:
            violations.append(UncoveredPair(graph.vertices[a], graph.vertices[b]))
    return Verdict(tuple(violations))
