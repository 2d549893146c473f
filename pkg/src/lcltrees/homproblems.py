"""Homomorphism LCLs, clique detection, the H_Δ family and a homomorphism solver."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .core import HalfEdgeGraph, Lcl, make_graph


class HomError(ValueError):
    pass


class EmptyGraph(HomError):
    pass


class DeltaTooSmall(HomError):
    pass


class NotAForest(HomError):
    pass


class DegreeTooHigh(HomError):
    pass


@dataclass(frozen=True)
class SimpleGraph:
    """Finite loopless undirected graph on named vertices."""

    vertices: tuple
    edges: frozenset[frozenset]

    def __post_init__(self):
        vs = tuple(self.vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate vertex names")
        es = frozenset(frozenset(e) for e in self.edges)
        known = set(vs)
        for e in es:
            if len(e) != 2:
                raise ValueError(f"loop or malformed edge {sorted(e, key=str)}")
            if not e <= known:
                raise ValueError(f"edge {sorted(e, key=str)} uses an unknown vertex")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[Sequence]) -> "SimpleGraph":
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges))

    @cached_property
    def adj(self) -> dict:
        out = {v: set() for v in self.vertices}
        for e in self.edges:
            x, y = tuple(e)
            out[x].add(y)
            out[y].add(x)
        return {v: frozenset(ns) for v, ns in out.items()}

    def adjacent(self, x, y) -> bool:
        return y in self.adj[x]

    def max_degree(self) -> int:
        return max((len(ns) for ns in self.adj.values()), default=0)

    def components(self) -> list[list]:
        seen = set()
        out = []
        for v in self.vertices:
            if v in seen:
                continue
            seen.add(v)
            comp = [v]
            queue = deque([v])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            out.append(comp)
        return out

    def is_forest(self) -> bool:
        return len(self.edges) == len(self.vertices) - len(self.components())

    def subgraph(self, keep: Iterable) -> "SimpleGraph":
        keep = set(keep)
        return SimpleGraph(tuple(v for v in self.vertices if v in keep),
                           frozenset(e for e in self.edges if e <= keep))


def lcl_from_graph(h: SimpleGraph, delta: int) -> Lcl:
    """Π_H: constant vertex stars, edges labeled by adjacent pairs of H."""
    if not h.vertices:
        raise EmptyGraph("H must have at least one vertex")
    names = [str(v) for v in h.vertices]
    return Lcl.from_names(delta, names, [[n] * delta for n in names],
                          [[str(x), str(y)] for x, y in (tuple(e) for e in h.edges)])


def has_clique(h: SimpleGraph, size: int) -> bool:
    if size < 1:
        raise ValueError("clique size must be >= 1")
    # only vertices of degree >= size-1 can take part
    cands = [v for v in h.vertices if len(h.adj[v]) >= size - 1]
    return any(all(h.adjacent(x, y) for x, y in combinations(group, 2))
               for group in combinations(cands, size))


def build_h_delta(delta: int) -> SimpleGraph:
    """``H_2`` is the 5-cycle ``v0..v4``; ``H_{d+1}`` adds apex ``w{d+1}`` over ``H_d``."""
    if delta < 2:
        raise DeltaTooSmall("H_delta is defined for delta >= 2")
    vertices = [f"v{i}" for i in range(5)]
    edges = [(f"v{i}", f"v{(i + 1) % 5}") for i in range(5)]
    for d in range(3, delta + 1):
        apex = f"w{d}"
        edges += [(apex, v) for v in vertices]
        vertices.append(apex)
    return SimpleGraph.from_edges(vertices, edges)


def maximal_discrete_set(g: SimpleGraph, r: int, order: Sequence | None = None) -> set:
    """Greedy maximal set with pairwise path distance greater than ``r``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    chosen: set = set()
    for v in (g.vertices if order is None else order):
        seen = {v}
        frontier = [v]
        near = v in chosen
        for _ in range(r):
            if near or not frontier:
                break
            nxt = []
            for u in frontier:
                for w in g.adj[u]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            near = any(w in chosen for w in nxt)
            frontier = nxt
        if not near:
            chosen.add(v)
    return chosen


def _extend_tree_hom(g: SimpleGraph, comp: Sequence, h: SimpleGraph,
                     allowed: Mapping, out: dict):
    """Exact DP: map a tree component into ``h`` with per-vertex allowed images."""
    root = comp[0]
    order, parent = [root], {root: None}
    for u in order:
        for w in sorted(g.adj[u], key=g.vertices.index):
            if w != parent[u] and w in allowed:
                parent[w] = u
                order.append(w)
    feas: dict = {}
    for u in reversed(order):
        ok = []
        for c in allowed[u]:
            if all(any(h.adjacent(c, d) for d in feas[w])
                   for w in order if parent.get(w) == u):
                ok.append(c)
        if not ok:
            raise HomError(f"no homomorphic extension at vertex {u!r}")
        feas[u] = ok
    for u in order:
        p = parent[u]
        out[u] = next(c for c in feas[u] if p is None or h.adjacent(c, out[p]))


def hom_solve_h_delta(forest: SimpleGraph, delta: int) -> dict:
    """Homomorphism from a forest of maximum degree ``<= delta`` into ``H_delta``.

    Peels off a maximal independent set onto the apex ``w{delta}`` until the
    degree bound reaches 2; then pins a maximal 4-discrete set to ``v0`` and
    completes the remaining short paths into the 5-cycle.
    """
    if delta < 2:
        raise DeltaTooSmall("delta must be >= 2")
    if not forest.is_forest():
        raise NotAForest("input graph has a cycle")
    if forest.max_degree() > delta:
        raise DegreeTooHigh(f"maximum degree {forest.max_degree()} exceeds {delta}")
    h = build_h_delta(delta)
    out: dict = {}
    g = forest
    for d in range(delta, 2, -1):
        independent = maximal_discrete_set(g, 1)
        for v in independent:
            out[v] = f"w{d}"
        g = g.subgraph(v for v in g.vertices if v not in independent)
    anchors = maximal_discrete_set(g, 4)
    for v in anchors:
        out[v] = "v0"
    rest = g.subgraph(v for v in g.vertices if v not in anchors)
    c5 = build_h_delta(2)
    for comp in rest.components():
        allowed = {}
        for v in comp:
            if any(w in anchors for w in g.adj[v]):
                allowed[v] = ["v1", "v4"]
            else:
                allowed[v] = list(c5.vertices)
        _extend_tree_hom(rest, comp, h, allowed, out)
    return out


def is_homomorphism(g: SimpleGraph, h: SimpleGraph, mapping: Mapping) -> bool:
    return (set(mapping) == set(g.vertices)
            and all(h.adjacent(*(mapping[v] for v in e)) for e in g.edges))


def to_half_edge(g: SimpleGraph, delta: int) -> tuple[HalfEdgeGraph, dict]:
    """Pad ``g`` to a Δ-regular half-edge graph; returns it with the vertex-id map."""
    ids = {v: i for i, v in enumerate(g.vertices)}
    records = []
    n = 0
    for e in sorted((sorted(ids[v] for v in e) for e in g.edges)):
        records.append((f"e{n}", tuple(e)))
        n += 1
    for v in g.vertices:
        for _ in range(delta - len(g.adj[v])):
            records.append((f"e{n}", (ids[v],)))
            n += 1
    return make_graph(ids.values(), records, delta), ids


def hom_to_coloring(g: SimpleGraph, delta: int, mapping: Mapping, lcl: Lcl):
    """Half-edge graph and coloring giving each half edge its vertex's image."""
    graph, ids = to_half_edge(g, delta)
    coloring = {}
    for v, x in ids.items():
        for e in graph.incident[x]:
            coloring[x, e] = lcl.label(str(mapping[v]))
    return graph, coloring
