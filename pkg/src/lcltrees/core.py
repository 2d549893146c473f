"""Half-edge graphs, LCL problems and Π-coloring verification.

Labels are held internally as integer indices into ``Lcl.sigma``; multisets of
labels are sorted tuples of those indices.  Vertex ids are non-negative ints and
edge ids are strings (``"e0"``, ``"e1"``, ...), ordered naturally so that
``"e2" < "e10"``.
"""
from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

Multiset = tuple[int, ...]
HalfEdge = tuple[int, str]
Coloring = dict[HalfEdge, int]


class GraphError(ValueError):
    pass


class DegreeMismatch(GraphError):
    pass


class MultiEdge(GraphError):
    pass


class BadEndpointCount(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class KOutOfRange(GraphError):
    pass


class NotAForest(GraphError):
    pass


_DIGITS = re.compile(r"(\d+)")


@lru_cache(maxsize=1 << 20)
def edge_key(edge_id: str):
    """Natural sort key for edge ids."""
    return tuple(int(t) if t.isdigit() else t for t in _DIGITS.split(edge_id))


def multiset(labels: Iterable[int]) -> Multiset:
    return tuple(sorted(labels))


def contains(big: Multiset, small: Iterable[int]) -> bool:
    """Multiset inclusion ``small ⊆ big``."""
    need = Counter(small)
    have = Counter(big)
    return all(have[k] >= n for k, n in need.items())


# ---------------------------------------------------------------------------
# LCLs


@dataclass(frozen=True)
class Lcl:
    """An LCL ``(Σ, 𝒱, ℰ)`` on Δ-regular graphs.

    Constraint multisets are canonicalized on construction (sorted, deduplicated),
    so two ``Lcl`` values compare equal iff they describe the same problem with
    the same label order.
    """

    delta: int
    sigma: tuple[str, ...]
    vertex_constraints: tuple[Multiset, ...]
    edge_constraints: tuple[Multiset, ...]

    def __post_init__(self):
        if self.delta < 2:
            raise ValueError(f"delta must be >= 2, got {self.delta}")
        sigma = tuple(self.sigma)
        if len(set(sigma)) != len(sigma):
            raise ValueError("duplicate label names in sigma")
        vcs = tuple(sorted({multiset(v) for v in self.vertex_constraints}))
        ecs = tuple(sorted({multiset(e) for e in self.edge_constraints}))
        n = len(sigma)
        for v in vcs:
            if len(v) != self.delta:
                raise ValueError(f"vertex constraint {v} has size {len(v)} != {self.delta}")
        for e in ecs:
            if len(e) != 2:
                raise ValueError(f"edge constraint {e} has size {len(e)} != 2")
        for m in vcs + ecs:
            if any(not 0 <= s < n for s in m):
                raise ValueError(f"constraint {m} uses a label outside sigma")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "vertex_constraints", vcs)
        object.__setattr__(self, "edge_constraints", ecs)

    @classmethod
    def from_names(cls, delta: int, sigma: Sequence[str],
                   vertex_constraints: Iterable[Iterable[str]],
                   edge_constraints: Iterable[Iterable[str]]) -> "Lcl":
        index = {name: i for i, name in enumerate(sigma)}

        def conv(ms):
            try:
                return tuple(index[s] for s in ms)
            except KeyError as exc:
                raise ValueError(f"label {exc.args[0]!r} not in sigma") from None

        return cls(delta, tuple(sigma), tuple(conv(v) for v in vertex_constraints),
                   tuple(conv(e) for e in edge_constraints))

    @property
    def n_labels(self) -> int:
        return len(self.sigma)

    def label(self, name: str) -> int:
        return self.sigma.index(name)

    def names(self, labels: Iterable[int]) -> list[str]:
        return [self.sigma[s] for s in labels]

    @cached_property
    def vset(self) -> frozenset[Multiset]:
        return frozenset(self.vertex_constraints)

    @cached_property
    def eset(self) -> frozenset[Multiset]:
        return frozenset(self.edge_constraints)

    @cached_property
    def partners(self) -> tuple[frozenset[int], ...]:
        """``partners[s]`` = labels ``u`` with ``{s, u} ∈ ℰ``."""
        out = [set() for _ in self.sigma]
        for s, u in self.edge_constraints:
            out[s].add(u)
            out[u].add(s)
        return tuple(frozenset(p) for p in out)

    def edge_ok(self, s: int, u: int) -> bool:
        return (min(s, u), max(s, u)) in self.eset


# ---------------------------------------------------------------------------
# Graphs


@dataclass(frozen=True)
class HalfEdgeGraph:
    """A finite Δ-regular graph in the half-edge sense.

    ``ends`` maps each edge id to its 1 or 2 endpoints.  Construct through
    :func:`make_graph`, which validates regularity.
    """

    delta: int
    vertices: tuple[int, ...]
    ends: Mapping[str, tuple[int, ...]] = field(repr=False)

    @cached_property
    def edges(self) -> tuple[str, ...]:
        return tuple(sorted(self.ends, key=edge_key))

    @cached_property
    def incident(self) -> dict[int, tuple[str, ...]]:
        inc: dict[int, list[str]] = {x: [] for x in self.vertices}
        for e in self.edges:
            for x in self.ends[e]:
                inc[x].append(e)
        return {x: tuple(es) for x, es in inc.items()}

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {x: [] for x in self.vertices}
        for e in self.edges:
            pts = self.ends[e]
            if len(pts) == 2:
                x, y = pts
                adj[x].append(y)
                adj[y].append(x)
        return {x: tuple(sorted(ys)) for x, ys in adj.items()}

    @cached_property
    def _vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def has_vertex(self, x: int) -> bool:
        return x in self._vertex_set

    def is_true(self, e: str) -> bool:
        return len(self.ends[e]) == 2

    def other_end(self, x: int, e: str) -> int | None:
        pts = self.ends[e]
        if len(pts) == 1:
            return None
        return pts[1] if pts[0] == x else pts[0]

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    def half_edges(self) -> list[HalfEdge]:
        return [(x, e) for x in self.vertices for e in self.incident[x]]

    def true_edges(self) -> list[str]:
        return [e for e in self.edges if len(self.ends[e]) == 2]

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, listed by least vertex."""
        seen: set[int] = set()
        comps = []
        for x in self.vertices:
            if x in seen:
                continue
            seen.add(x)
            comp = [x]
            queue = deque([x])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_forest(self) -> bool:
        n_true = sum(1 for e in self.edges if len(self.ends[e]) == 2)
        return n_true == len(self.vertices) - len(self.components())

    def induced(self, keep: Iterable[int]) -> "HalfEdgeGraph":
        """Induced half-edge subgraph; edges leaving ``keep`` become virtual."""
        keep = set(keep)
        ends = {}
        for x in sorted(keep):
            for e in self.incident[x]:
                if e not in ends:
                    ends[e] = tuple(p for p in self.ends[e] if p in keep)
        return HalfEdgeGraph(self.delta, tuple(sorted(keep)), ends)


def make_graph(vertex_ids: Iterable[int],
               edge_records: Iterable[tuple[str, Sequence[int]]],
               delta: int) -> HalfEdgeGraph:
    """Validate and build a Δ-regular half-edge graph.

    ``edge_records`` holds ``(edge_id, endpoints)`` pairs with 1 or 2 endpoints.
    """
    vertices = tuple(sorted(set(vertex_ids)))
    vset = set(vertices)
    ends: dict[str, tuple[int, ...]] = {}
    count = Counter()
    pairs: set[tuple[int, int]] = set()
    for eid, pts in edge_records:
        eid = str(eid)
        pts = tuple(pts)
        if eid in ends:
            raise GraphError(f"duplicate edge id {eid!r}")
        if len(pts) not in (1, 2) or len(set(pts)) != len(pts):
            raise BadEndpointCount(f"edge {eid!r} has endpoints {list(pts)}")
        for x in pts:
            if x not in vset:
                raise UnknownVertex(f"edge {eid!r} references undeclared vertex {x}")
            count[x] += 1
        if len(pts) == 2:
            pair = (min(pts), max(pts))
            if pair in pairs:
                raise MultiEdge(f"vertices {pair[0]} and {pair[1]} share more than one edge")
            pairs.add(pair)
            pts = pair
        ends[eid] = pts
    for x in vertices:
        if count[x] != delta:
            raise DegreeMismatch(f"vertex {x} has {count[x]} incident edges, expected {delta}")
    return HalfEdgeGraph(delta, vertices, ends)


def build_path(delta: int, length: int) -> HalfEdgeGraph:
    """Δ-regular path ``x_0 .. x_L``; path edges are ``e0 .. e{L-1}``."""
    if length < 0:
        raise ValueError("length must be >= 0")
    records = [(f"e{i}", (i, i + 1)) for i in range(length)]
    n = length
    for x in range(length + 1):
        free = delta - (x > 0) - (x < length)
        for _ in range(free):
            records.append((f"e{n}", (x,)))
            n += 1
    return make_graph(range(length + 1), records, delta)


def build_star(delta: int, k: int) -> HalfEdgeGraph:
    """Center 0 adjacent to leaves ``1 .. k``, everything else virtual."""
    if not 0 <= k <= delta:
        raise KOutOfRange(f"k={k} outside 0..{delta}")
    records = [(f"e{i}", (0, i + 1)) for i in range(k)]
    n = k
    for x in range(k + 1):
        free = delta - k if x == 0 else delta - 1
        for _ in range(free):
            records.append((f"e{n}", (x,)))
            n += 1
    return make_graph(range(k + 1), records, delta)


def neighborhood(graph: HalfEdgeGraph, vertex_set: Iterable[int], r: int) -> set[int]:
    """``B(S, r)``: vertices within path distance ``r`` of ``S``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    start = set(vertex_set)
    for x in start:
        if not graph.has_vertex(x):
            raise UnknownVertex(f"vertex {x} not in graph")
    seen = set(start)
    frontier = list(start)
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in graph.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return seen


def distances_from(graph: HalfEdgeGraph, sources: Iterable[int], limit: int | None = None) -> dict[int, int]:
    """Multi-source BFS distances, optionally truncated at ``limit``."""
    dist = {x: 0 for x in sources}
    queue = deque(dist)
    while queue:
        u = queue.popleft()
        d = dist[u]
        if limit is not None and d >= limit:
            continue
        for w in graph.adjacency[u]:
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class EdgeViolation:
    edge: str
    pair: Multiset


@dataclass(frozen=True)
class VertexViolation:
    vertex: int
    observed: Multiset


@dataclass(frozen=True)
class Incomplete:
    half_edges: tuple[HalfEdge, ...]


@dataclass(frozen=True)
class Verdict:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def star(graph: HalfEdgeGraph, coloring: Mapping[HalfEdge, int], x: int) -> Multiset | None:
    try:
        return multiset(coloring[x, e] for e in graph.incident[x])
    except KeyError:
        return None


def verify_coloring(graph: HalfEdgeGraph, lcl: Lcl, coloring: Mapping[HalfEdge, int],
                    vertex_constraints: Iterable[Multiset] | None = None) -> Verdict:
    """Check that ``coloring`` is a Π-coloring of ``graph``; report every violation.

    ``vertex_constraints`` optionally replaces ``𝒱`` (e.g. by a subset ``V′``).
    """
    allowed = lcl.vset if vertex_constraints is None else frozenset(vertex_constraints)
    for (x, e) in coloring:
        if not graph.has_vertex(x) or e not in graph.ends or x not in graph.ends[e]:
            raise ValueError(f"coloring key {(x, e)} is not a half edge of the graph")
    violations: list = []
    missing = tuple(h for h in graph.half_edges() if h not in coloring)
    if missing:
        violations.append(Incomplete(missing))
    for e in graph.edges:
        pts = graph.ends[e]
        if len(pts) == 2 and (pts[0], e) in coloring and (pts[1], e) in coloring:
            pair = multiset((coloring[pts[0], e], coloring[pts[1], e]))
            if pair not in lcl.eset:
                violations.append(EdgeViolation(e, pair))
    for x in graph.vertices:
        m = star(graph, coloring, x)
        if m is not None and m not in allowed:
            violations.append(VertexViolation(x, m))
    return Verdict(tuple(violations))
