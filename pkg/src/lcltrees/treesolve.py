"""Exact completion of partial colorings on finite Δ-regular forests.

Each tree component is rooted at its least vertex.  A bottom-up pass computes,
for every non-root vertex, the labels its parent-side half edge can carry in
some completion of its subtree; a top-down pass then materializes the
lexicographically least witness (labels in sigma order, half edges in edge-id
order at each vertex).
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .core import Coloring, HalfEdge, HalfEdgeGraph, Lcl, Multiset, NotAForest

Slot = frozenset | None  # allowed labels for one half edge; None = unconstrained


def assign_star(allowed: Sequence[Slot], m: Multiset) -> tuple[int, ...] | None:
    """Least assignment of the multiset ``m`` to slots respecting ``allowed``.

    Returns labels in slot order, or None if no bijection exists.
    """
    if len(allowed) != len(m):
        return None
    counts = Counter(m)
    labels = sorted(counts)
    out: list[int] = []

    def rec(i: int) -> bool:
        if i == len(allowed):
            return True
        ok = allowed[i]
        for s in labels:
            if counts[s] and (ok is None or s in ok):
                counts[s] -= 1
                out.append(s)
                if rec(i + 1):
                    return True
                out.pop()
                counts[s] += 1
        return False

    return tuple(out) if rec(0) else None


def solve_star(allowed: Sequence[Slot], multisets: Iterable[Multiset]) -> tuple[Multiset, tuple[int, ...]] | None:
    """First multiset (in the given order) that fits the slots, with its least assignment."""
    for m in multisets:
        got = assign_star(allowed, m)
        if got is not None:
            return m, got
    return None


@dataclass(frozen=True)
class CompletionQuery:
    graph: HalfEdgeGraph
    lcl: Lcl
    partial: Mapping[HalfEdge, int] = field(default_factory=dict)
    restrict_vertices: tuple[Multiset, ...] | None = None

    def __post_init__(self):
        if not self.graph.is_forest():
            raise NotAForest("completion needs an acyclic graph")
        if self.graph.delta != self.lcl.delta:
            raise ValueError("graph and LCL disagree on delta")
        for (x, e), s in self.partial.items():
            if not self.graph.has_vertex(x) or e not in self.graph.ends or x not in self.graph.ends[e]:
                raise ValueError(f"partial key {(x, e)} is not a half edge of the graph")
            if not 0 <= s < self.lcl.n_labels:
                raise ValueError(f"partial label {s} outside sigma")
        if self.restrict_vertices is not None:
            rv = tuple(sorted(set(self.restrict_vertices)))
            if not set(rv) <= self.lcl.vset:
                raise ValueError("restrict_vertices must be a subset of the vertex constraints")
            object.__setattr__(self, "restrict_vertices", rv)

    @property
    def multisets(self) -> tuple[Multiset, ...]:
        if self.restrict_vertices is None:
            return self.lcl.vertex_constraints
        return self.restrict_vertices


class _Solver:
    def __init__(self, q: CompletionQuery):
        self.q = q
        self.g = q.graph
        self.lcl = q.lcl
        self.multisets = q.multisets
        self.parent_edge: dict[int, str | None] = {}
        self.children: dict[int, list[tuple[str, int]]] = {}
        self.order: list[int] = []
        self.roots: list[int] = []
        self.up: dict[int, frozenset[int]] = {}
        self.root_ok: dict[int, bool] = {}
        # label sets compatible across an edge, memoized by child feasible set
        self._compat: dict[frozenset[int], frozenset[int]] = {}

    def _fixed(self, x: int, e: str) -> Slot:
        s = self.q.partial.get((x, e))
        return None if s is None else frozenset((s,))

    def _compatible(self, child_up: frozenset[int]) -> frozenset[int]:
        got = self._compat.get(child_up)
        if got is None:
            partners = self.lcl.partners
            got = frozenset(u for u in range(self.lcl.n_labels) if partners[u] & child_up)
            self._compat[child_up] = got
        return got

    def _root_all(self):
        seen: set[int] = set()
        for r in self.g.vertices:
            if r in seen:
                continue
            self.roots.append(r)
            seen.add(r)
            self.parent_edge[r] = None
            queue = deque([r])
            while queue:
                x = queue.popleft()
                self.order.append(x)
                kids = []
                for e in self.g.incident[x]:
                    if e == self.parent_edge[x]:
                        continue
                    y = self.g.other_end(x, e)
                    if y is not None:
                        seen.add(y)
                        self.parent_edge[y] = e
                        kids.append((e, y))
                        queue.append(y)
                self.children[x] = kids

    def _slots(self, x: int) -> tuple[list[Slot], int | None]:
        """Allowed sets for x's half edges, and the index of the parent slot."""
        child_of = {e: y for e, y in self.children[x]}
        slots: list[Slot] = []
        parent_idx = None
        for i, e in enumerate(self.g.incident[x]):
            fixed = self._fixed(x, e)
            if e == self.parent_edge[x]:
                parent_idx = i
                slots.append(fixed)
            elif e in child_of:
                comp = self._compatible(self.up[child_of[e]])
                slots.append(comp if fixed is None else comp & fixed)
            else:
                slots.append(fixed)
        return slots, parent_idx

    def bottom_up(self) -> bool:
        self._root_all()
        for x in reversed(self.order):
            slots, pi = self._slots(x)
            if pi is None:
                self.root_ok[x] = solve_star(slots, self.multisets) is not None
                continue
            pfixed = slots[pi]
            others = slots[:pi] + slots[pi + 1:]
            feasible = set()
            for m in self.multisets:
                for s in set(m):
                    if s in feasible or (pfixed is not None and s not in pfixed):
                        continue
                    rest = list(m)
                    rest.remove(s)
                    if assign_star(others, tuple(rest)) is not None:
                        feasible.add(s)
            self.up[x] = frozenset(feasible)
        return all(self.root_ok.values()) and all(self.up.values())

    def top_down(self) -> Coloring:
        out: Coloring = {}
        forced: dict[int, int] = {}
        for x in self.order:
            slots, pi = self._slots(x)
            if pi is not None:
                slots[pi] = frozenset((forced[x],))
            got = solve_star(slots, self.multisets)
            assert got is not None, f"top-down pass stuck at vertex {x}"
            _, labels = got
            for e, s in zip(self.g.incident[x], labels):
                out[x, e] = s
            child_of = {e: y for e, y in self.children[x]}
            for e, s in zip(self.g.incident[x], labels):
                y = child_of.get(e)
                if y is not None:
                    forced[y] = min(l for l in self.up[y] if self.lcl.edge_ok(s, l))
        return out


def complete(query: CompletionQuery) -> Coloring | None:
    """A total Π-coloring extending ``query.partial``, or None if none exists."""
    solver = _Solver(query)
    if not solver.bottom_up():
        return None
    return solver.top_down()


def is_extendable(query: CompletionQuery) -> bool:
    return _Solver(query).bottom_up()
