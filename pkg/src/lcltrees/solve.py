"""Constructive solvers: the online greedy solver and the toast-driven solver."""
from __future__ import annotations

from typing import Callable, Sequence

from .classify import FullnessCertificate, GreedyCertificate, is_greedy_set, minimal_full_length
from .core import Coloring, HalfEdgeGraph, Lcl, NotAForest
from .toast import build_toast
from .treesolve import CompletionQuery, complete, solve_star

Trace = Callable[[dict], None]


class CertificateInvalid(ValueError):
    pass


class CompletionFailure(RuntimeError):
    pass


def _order(graph: HalfEdgeGraph, order: Sequence[int] | None) -> list[int]:
    out = list(graph.vertices) if order is None else list(order)
    if sorted(out) != list(graph.vertices):
        raise ValueError("order must be a permutation of the vertices")
    return out


def _check_greedy_invariant(graph: HalfEdgeGraph, coloring: Coloring, sigma_prime: frozenset[int]):
    for e in graph.edges:
        pts = graph.ends[e]
        colored = [x for x in pts if (x, e) in coloring]
        if len(pts) == 2 and len(colored) == 1:
            s = coloring[colored[0], e]
            assert s in sigma_prime, f"half edge {(colored[0], e)} left open with label {s} outside sigma'"


def greedy_color(graph: HalfEdgeGraph, lcl: Lcl, certificate: GreedyCertificate,
                 order: Sequence[int] | None = None, *, trace: Trace | None = None,
                 debug: bool = False) -> Coloring:
    """Color vertex stars one at a time in ``order``, never revisiting a choice.

    Half edges from already-processed neighbours are treated as precolored; every
    other half edge at the current vertex receives a label from ``Σ′``, which is
    what keeps the next stars solvable.  Cycles are fine.
    """
    sp = frozenset(certificate.sigma_prime)
    if not sp or not is_greedy_set(lcl, sp):
        raise CertificateInvalid(f"{sorted(sp)} is not a greedy label set")
    coloring: Coloring = {}
    done: set[int] = set()
    for stage, n in enumerate(_order(graph, order)):
        slots = []
        for e in graph.incident[n]:
            y = graph.other_end(n, e)
            if y is not None and y in done:
                slots.append(lcl.partners[coloring[y, e]])
            else:
                slots.append(sp)
        got = solve_star(slots, lcl.vertex_constraints)
        if got is None:
            raise CompletionFailure(f"star at vertex {n} has no greedy completion")
        _, labels = got
        for e, s in zip(graph.incident[n], labels):
            coloring[n, e] = s
        done.add(n)
        if debug:
            _check_greedy_invariant(graph, coloring, sp)
        if trace is not None:
            trace({"stage": stage, "vertex": n,
                   "labels": {e: lcl.sigma[s] for e, s in zip(graph.incident[n], labels)}})
    return coloring


def toast_color(graph: HalfEdgeGraph, lcl: Lcl, certificate: FullnessCertificate | None,
                stream_order: Sequence[int] | None = None, *, trace: Trace | None = None,
                buffer: int | None = None) -> Coloring:
    """Solve an l-full problem piece by piece over a ``(2l+2)``-toast.

    Each piece is completed exactly (tree DP restricted to ``V′``) around the
    assignments committed by earlier pieces, which are never revised.
    ``buffer`` overrides the toast parameter for experiments only.
    """
    if certificate is None:
        raise CertificateInvalid("no fullness certificate")
    vp = tuple(sorted(set(certificate.v_prime)))
    if not vp or not set(vp) <= lcl.vset:
        raise CertificateInvalid("V' must be a nonempty subset of the vertex constraints")
    l0 = minimal_full_length(lcl, vp)
    if l0 is None or l0 > certificate.l:
        raise CertificateInvalid(f"V' is not {certificate.l}-full")
    if not graph.is_forest():
        raise NotAForest("toast_color needs a forest")
    toast = build_toast(graph, 2 * certificate.l + 2 if buffer is None else buffer, stream_order)
    committed: Coloring = {}
    for piece in toast.pieces:
        region = set(piece.vertices)
        for x in piece.vertices:
            for y in graph.adjacency[x]:
                if (y, graph.incident[y][0]) in committed:
                    region.add(y)
        sub = graph.induced(region)
        partial = {(x, e): committed[x, e] for x in sub.vertices for e in sub.incident[x]
                   if (x, e) in committed}
        got = complete(CompletionQuery(sub, lcl, partial, vp))
        if got is None:
            raise CompletionFailure(f"piece {piece.id} admits no completion inside V'")
        fresh = {}
        for x in piece.vertices:
            for e in graph.incident[x]:
                if (x, e) not in committed:
                    fresh[x, e] = got[x, e]
        committed.update(fresh)
        if trace is not None:
            trace({"piece": piece.id, "stage": piece.stage,
                   "assignments": [[x, e, lcl.sigma[s]] for (x, e), s in sorted(fresh.items())]})
    return committed
