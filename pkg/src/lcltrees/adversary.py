"""Adversarial tree constructions against online solvers.

Both constructions grow a finite Δ-regular forest stage by stage while querying
a deterministic online solver.  The solver may only look at earlier stages of
the construction; once it commits a label for a half edge that label is final.
Whenever the solver has committed to a Π-coloring of every tracked object, the
adversary grows its tracked set (``V′`` in ``hc`` mode, ``Σ′`` in ``comp``
mode) and splices in a bad path or bad star so that the commitments already
made cannot be extended.  Since the tracked set can only grow ``|𝒱|`` resp.
``|Σ|`` times, the solver must eventually stall or commit a violation.
"""
from __future__ import annotations

import warnings
from abc import ABC, abstractmethod
from bisect import insort
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .classify import (GreedyCertificate, decide_fullness, decide_greediness, find_bad_path_witness,
                       find_bad_star_witness)
from .core import HalfEdge, HalfEdgeGraph, Lcl, Verdict, edge_key, make_graph, multiset, verify_coloring
from .treesolve import CompletionQuery, complete, solve_star


class PreconditionError(ValueError):
    pass


class LclIsFull(PreconditionError):
    pass


class LclIsGreedy(PreconditionError):
    pass


class BadParameter(ValueError):
    pass


class InvariantBreach(RuntimeError):
    pass


class _Undetermined:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNDETERMINED"

    def __bool__(self):
        return False


UNDETERMINED = _Undetermined()


# ---------------------------------------------------------------------------
# stage-stamped forest


class StagedForest:
    """Append-only Δ-regular forest; every vertex and incidence remembers its stage."""

    def __init__(self, delta: int):
        self.delta = delta
        self.vstage: dict[int, int] = {}
        self.inc: dict[int, list[str]] = {}  # kept in edge_key order
        self.ends: dict[str, list[int]] = {}
        self.istage: dict[HalfEdge, int] = {}
        self.virtual: set[str] = set()
        self._next_v = 0
        self._next_e = 0
        self.log_vertices: list[int] = []
        self.log_incidences: list[HalfEdge] = []

    def new_vertex(self, stage: int) -> int:
        x = self._next_v
        self._next_v += 1
        self.vstage[x] = stage
        self.inc[x] = []
        self.log_vertices.append(x)
        return x

    def new_edge(self) -> str:
        e = f"e{self._next_e}"
        self._next_e += 1
        self.ends[e] = []
        return e

    def attach(self, x: int, e: str, stage: int):
        pts = self.ends[e]
        if len(pts) >= 2 or x in pts:
            raise InvariantBreach(f"cannot attach vertex {x} to edge {e}")
        if len(self.inc[x]) >= self.delta:
            raise InvariantBreach(f"vertex {x} already has {self.delta} incidences")
        pts.append(x)
        insort(self.inc[x], e, key=edge_key)
        self.istage[x, e] = stage
        if len(pts) == 1:
            self.virtual.add(e)
        else:
            self.virtual.discard(e)
        self.log_incidences.append((x, e))

    def fresh_vertex_with_virtuals(self, stage: int, n_virtual: int) -> int:
        x = self.new_vertex(stage)
        for _ in range(n_virtual):
            self.attach(x, self.new_edge(), stage)
        return x

    def other(self, x: int, e: str) -> int | None:
        pts = self.ends[e]
        if len(pts) < 2:
            return None
        return pts[1] if pts[0] == x else pts[0]

    def edges_at(self, x: int) -> list[str]:
        return self.inc[x]

    def take_log(self) -> tuple[list[int], list[HalfEdge]]:
        out = (self.log_vertices, self.log_incidences)
        self.log_vertices, self.log_incidences = [], []
        return out

    def graph(self) -> HalfEdgeGraph:
        return make_graph(self.vstage, ((e, pts) for e, pts in self.ends.items() if pts), self.delta)


class PrefixOracle:
    """Read-only view of the construction, restricted to stages below ``bound``."""

    def __init__(self, forest: StagedForest, bound: int):
        self._f = forest
        self.bound = bound

    @property
    def latest(self) -> int:
        return self.bound - 1

    def vertex_exists(self, x: int, s: int):
        if s >= self.bound:
            return UNDETERMINED
        st = self._f.vstage.get(x)
        return st is not None and st <= s

    def incidence(self, x: int, e: str, s: int):
        if s >= self.bound:
            return UNDETERMINED
        st = self._f.istage.get((x, e))
        return st is not None and st <= s

    def true_edge(self, e: str, s: int):
        if s >= self.bound:
            return UNDETERMINED
        pts = self._f.ends.get(e, ())
        return sum(1 for x in pts if self._f.istage[x, e] <= s) == 2

    def edges_at(self, x: int, s: int):
        if s >= self.bound:
            return UNDETERMINED
        if not self.vertex_exists(x, s):
            return ()
        return tuple(e for e in self._f.inc[x] if self._f.istage[x, e] <= s)

    def ends(self, e: str, s: int):
        if s >= self.bound:
            return UNDETERMINED
        return tuple(x for x in self._f.ends.get(e, ()) if self._f.istage[x, e] <= s)


# ---------------------------------------------------------------------------
# solvers


class OnlineSolver(ABC):
    """A deterministic candidate coloring, evaluated with a step budget."""

    @abstractmethod
    def answer(self, half_edge: HalfEdge, budget: int, oracle: PrefixOracle) -> int | None:
        """Label for ``half_edge``, or None if not converged within ``budget``."""


class NeverSolver(OnlineSolver):
    def answer(self, half_edge, budget, oracle):
        return None


class ObliviousSolver(OnlineSolver):
    def __init__(self, label: int):
        self.label = label

    def answer(self, half_edge, budget, oracle):
        return self.label


class LookaheadSolver(OnlineSolver):
    """Commits once the radius-``r`` view around the half edge's vertex stops changing.

    The view is the induced half-edge graph on the ball; edges leaving the ball
    look virtual.  The committed label comes from the least Π-completion of the
    view (label 0 if the view has none).
    """

    def __init__(self, lcl: Lcl, radius: int):
        if radius < 0:
            raise BadParameter("lookahead radius must be >= 0")
        self.lcl = lcl
        self.radius = radius
        self._views: dict[tuple[int, int], tuple] = {}
        self._shapes: dict[tuple, dict] = {}
        self._labels: dict[tuple[int, int], dict[HalfEdge, int]] = {}
        self._floor = 0

    def _view(self, x: int, s: int, oracle: PrefixOracle) -> tuple:
        key = (x, s)
        got = self._views.get(key)
        if got is not None:
            return got
        ball = {x}
        frontier = [x]
        for _ in range(self.radius):
            nxt = []
            for u in frontier:
                for e in oracle.edges_at(u, s):
                    for w in oracle.ends(e, s):
                        if w not in ball:
                            ball.add(w)
                            nxt.append(w)
            frontier = nxt
        rows = []
        for u in sorted(ball):
            row = []
            for e in oracle.edges_at(u, s):
                other = [w for w in oracle.ends(e, s) if w != u and w in ball]
                row.append((e, other[0] if other else None))
            rows.append((u, tuple(row)))
        view = tuple(rows)
        self._views[key] = view
        return view

    def _complete(self, view: tuple) -> dict[HalfEdge, int]:
        vid = {u: i for i, (u, _) in enumerate(view)}
        eid: dict[str, str] = {}
        for _, row in view:
            for e, _ in row:
                eid.setdefault(e, f"e{len(eid)}")
        shape = tuple((vid[u], tuple((eid[e], None if w is None else vid[w]) for e, w in row))
                      for u, row in view)
        labels = self._shapes.get(shape)
        if labels is None:
            ends: dict[str, list[int]] = {}
            for u, row in shape:
                for e, _ in row:
                    ends.setdefault(e, []).append(u)
            g = make_graph(range(len(shape)), ends.items(), self.lcl.delta)
            labels = complete(CompletionQuery(g, self.lcl)) or {}
            self._shapes[shape] = labels
        back = {}
        for u, row in view:
            for e, _ in row:
                back[u, e] = labels.get((vid[u], eid[e]), 0)
        return back

    def answer(self, half_edge, budget, oracle):
        x, e = half_edge
        s = min(budget, oracle.latest)
        if s < 1 or not oracle.vertex_exists(x, s - 1):
            return None
        done = self._labels.get((x, s))
        if done is not None:
            return done[x, e]
        now = self._view(x, s, oracle)
        if now != self._view(x, s - 1, oracle):
            return None
        if s - 1 > self._floor:
            self._floor = s - 1
            self._views = {k: v for k, v in self._views.items() if k[1] >= self._floor}
            self._labels = {k: v for k, v in self._labels.items() if k[1] >= self._floor}
        self._labels[x, s] = done = self._complete(now)
        return done[x, e]


class ReplaySolver(OnlineSolver):
    """The greedy online solver evaluated lazily, vertex by vertex in id order.

    Sound because construction ids only grow: a vertex's smaller neighbours all
    exist by the time the vertex does.
    """

    def __init__(self, lcl: Lcl, certificate: GreedyCertificate):
        self.lcl = lcl
        self.sp = frozenset(certificate.sigma_prime)
        self._stars: dict[int, dict[str, int]] = {}

    def _star(self, x: int, s: int, oracle: PrefixOracle) -> dict[str, int] | None:
        got = self._stars.get(x)
        if got is not None:
            return got
        edges = oracle.edges_at(x, s)
        if len(edges) != self.lcl.delta:
            return None
        slots = []
        for e in edges:
            smaller = [w for w in oracle.ends(e, s) if w < x]
            if smaller:
                nb = self._star(smaller[0], s, oracle)
                if nb is None:
                    return None
                slots.append(self.lcl.partners[nb[e]])
            else:
                slots.append(self.sp)
        found = solve_star(slots, self.lcl.vertex_constraints)
        if found is None:
            return None
        star = dict(zip(edges, found[1]))
        self._stars[x] = star
        return star

    def answer(self, half_edge, budget, oracle):
        x, e = half_edge
        s = oracle.latest
        if s < 0 or not oracle.vertex_exists(x, s):
            return None
        star = self._star(x, s, oracle)
        return None if star is None else star.get(e)


def builtin_solver(spec: str, lcl: Lcl) -> OnlineSolver:
    """``lookahead:R`` | ``oblivious:LABEL`` | ``replay`` | ``never`` (``builtin:`` prefix optional)."""
    parts = spec.split(":")
    if parts and parts[0] == "builtin":
        parts = parts[1:]
    kind = parts[0] if parts else ""
    try:
        if kind == "lookahead" and len(parts) == 2:
            return LookaheadSolver(lcl, int(parts[1]))
        if kind == "oblivious" and len(parts) == 2:
            if parts[1] not in lcl.sigma:
                raise BadParameter(f"label {parts[1]!r} not in sigma")
            return ObliviousSolver(lcl.label(parts[1]))
        if kind == "replay" and len(parts) == 1:
            cert = decide_greediness(lcl)
            if cert is None:
                raise BadParameter("replay needs a greedy LCL")
            return ReplaySolver(lcl, cert)
        if kind == "never" and len(parts) == 1:
            return NeverSolver()
    except ValueError as exc:
        if isinstance(exc, BadParameter):
            raise
        raise BadParameter(f"bad solver spec {spec!r}") from exc
    raise BadParameter(f"bad solver spec {spec!r}")


# ---------------------------------------------------------------------------
# transcripts


@dataclass
class StageRecord:
    stage: int
    case: str  # initial | uninteresting | interesting | final
    added_vertices: list[int]
    added_incidences: list[HalfEdge]
    N: int
    tracked: list
    interesting_count: int
    pending: int = 0
    objects: dict | None = None  # tracked paths/centers and reserves, when they change
    details: dict = field(default_factory=dict)


@dataclass
class Outcome:
    kind: str  # VIOLATION | DIVERGENCE | BUDGET_EXHAUSTED
    stage: int
    witness: dict | None = None
    pending: list[HalfEdge] = field(default_factory=list)


@dataclass
class AdversaryTranscript:
    mode: str
    lcl: Lcl
    n0: int
    max_stages: int
    stages: list[StageRecord]
    final_graph: HalfEdgeGraph
    outcome: Outcome
    committed: dict[HalfEdge, int]


# ---------------------------------------------------------------------------
# shared harness


class _Game:
    def __init__(self, lcl: Lcl, solver: OnlineSolver, max_stages: int, n0: int, mode: str):
        self.lcl = lcl
        self.solver = solver
        self.max_stages = max_stages
        self.n0 = n0
        self.mode = mode
        self.f = StagedForest(lcl.delta)
        self.phi: dict[HalfEdge, int] = {}
        self.records: list[StageRecord] = []
        self.interesting = 0

    def ask(self, h: HalfEdge, m: int) -> int | None:
        got = self.phi.get(h)
        if got is not None:
            return got
        ans = self.solver.answer(h, m, PrefixOracle(self.f, m + 1))
        if ans is not None:
            if not 0 <= ans < self.lcl.n_labels:
                raise InvariantBreach(f"solver answered label {ans} outside sigma")
            self.phi[h] = ans
        return ans

    def record(self, stage: int, case: str, N: int, tracked, pending=0, objects=None, **details):
        vs, incs = self.f.take_log()
        self.records.append(StageRecord(stage, case, vs, incs, N, list(tracked), self.interesting,
                                        pending, objects, details))

    def check_region(self, vertices: Iterable[int]) -> Verdict | None:
        """None if the committed labels are a Π-coloring of the induced region, else the verdict."""
        region = set(vertices)
        clean = True
        for x in region:
            if multiset(self.phi[x, e] for e in self.f.inc[x]) not in self.lcl.vset:
                clean = False
                break
            for e in self.f.inc[x]:
                y = self.f.other(x, e)
                if y is not None and y in region and \
                        multiset((self.phi[x, e], self.phi[y, e])) not in self.lcl.eset:
                    clean = False
                    break
        if clean:
            return None
        ends = {}
        for x in sorted(region):
            for e in self.f.inc[x]:
                ends.setdefault(e, []).append(x)
        sub = make_graph(sorted(region), ends.items(), self.lcl.delta)
        return verify_coloring(sub, self.lcl, {h: self.phi[h] for h in sub.half_edges()})

    def converged(self, vertices: Iterable[int]) -> bool:
        return all((x, e) in self.phi for x in vertices for e in self.f.inc[x])

    def finish(self, outcome: Outcome) -> AdversaryTranscript:
        if self.f.log_vertices or self.f.log_incidences:
            raise InvariantBreach("unrecorded construction steps")
        return AdversaryTranscript(self.mode, self.lcl, self.n0, self.max_stages, self.records,
                                   self.f.graph(), outcome, dict(self.phi))


def _majority(values: Iterable) -> tuple:
    counts = Counter(values)
    best = max(counts.values())
    return min(v for v, c in counts.items() if c == best), best


# ---------------------------------------------------------------------------
# highly computable mode


def default_n0_hc(lcl: Lcl) -> int:
    v = len(lcl.vertex_constraints)
    return (4 * v) ** (v + 1)


def default_n0_comp(lcl: Lcl) -> int:
    s = lcl.n_labels
    return (2 * lcl.delta * s) ** (s + 1)


def _resolve_n0(n0_override: int | None, default: int) -> int:
    if n0_override is None:
        return default
    if n0_override < 1:
        raise BadParameter("n0 must be positive")
    if n0_override < default:
        warnings.warn(f"n0={n0_override} is below the safe default {default}; "
                      "InvariantBreach may fire", stacklevel=3)
    return n0_override


class _HcGame(_Game):
    def walk_to_virtual(self, v: int, first: str) -> tuple[list[int], str]:
        """Path ``[v, ..., p]`` leaving ``v`` through ``first``, and a virtual edge at ``p``."""
        if first in self.f.virtual:
            return [v], first
        path = [v]
        prev_edge, cur = first, self.f.other(v, first)
        while True:
            path.append(cur)
            rest = [e for e in self.f.edges_at(cur) if e != prev_edge]
            virt = [e for e in rest if e in self.f.virtual]
            if virt:
                return path, virt[0]
            prev_edge = rest[0]
            cur = self.f.other(cur, prev_edge)

    def cap_all(self, stage: int):
        delta = self.lcl.delta
        for e in sorted(self.f.virtual, key=edge_key):
            y = self.f.new_vertex(stage)
            self.f.attach(y, e, stage)
            for _ in range(delta - 1):
                self.f.attach(y, self.f.new_edge(), stage)

    def join(self, stage: int, v: int, e: str, p: int, w: int, f: str, q: int, n_new: int) -> list[int]:
        delta = self.lcl.delta
        fresh = [self.f.new_vertex(stage) for _ in range(n_new)]
        self.f.attach(fresh[0], e, stage)
        for a, b in zip(fresh, fresh[1:]):
            link = self.f.new_edge()
            self.f.attach(a, link, stage)
            self.f.attach(b, link, stage)
        self.f.attach(fresh[-1], f, stage)
        for x in fresh:
            for _ in range(delta - 2):
                self.f.attach(x, self.f.new_edge(), stage)
        return fresh


def run_hc_adversary(lcl: Lcl, solver: OnlineSolver, max_stages: int,
                     n0_override: int | None = None) -> AdversaryTranscript:
    """Build a truly Δ-regular tree on which ``solver`` fails to be a Π-coloring."""
    if decide_fullness(lcl) is not None:
        raise LclIsFull("the problem is full; no adversary exists")
    n_v = len(lcl.vertex_constraints)
    n0 = _resolve_n0(n0_override, default_n0_hc(lcl))
    g = _HcGame(lcl, solver, max_stages, n0, "hc")
    names = lambda ms: [lcl.names(m) for m in ms]

    paths = [[g.f.fresh_vertex_with_virtuals(0, lcl.delta)] for _ in range(n0)]
    v_prime: list = []
    reserves: dict = {}
    N = n0
    longest = 0
    pending: list = []
    g.record(0, "initial", N, [], objects={"paths": paths, "reserves": {}})

    for m in range(max_stages):
        stage = m + 1
        pending = [(x, e) for P in paths for x in P for e in g.f.edges_at(x)
                   if g.ask((x, e), m) is None]
        for i, P in enumerate(paths):
            if g.converged(P):
                bad = g.check_region(P)
                if bad is not None:
                    g.record(stage, "final", N, names(v_prime), len(pending))
                    return g.finish(Outcome("VIOLATION", stage,
                                            {"path": i, "vertices": P, "verdict": bad}))
        if pending:
            g.cap_all(stage)
            g.record(stage, "uninteresting", N, names(v_prime), len(pending))
            continue

        # interesting case: every P_i carries a committed Π-coloring
        if len(v_prime) == n_v:
            raise InvariantBreach("all paths Π-colored although V' is everything")
        star = lambda x: multiset(g.phi[x, e] for e in g.f.inc[x])
        zs = []
        for P in paths:
            z = next((x for x in P if star(x) not in v_prime), None)
            if z is None:
                raise InvariantBreach("Π-colored tracked path lies inside V'")
            zs.append(z)
        d, count = _majority(star(z) for z in zs)
        if count * n_v < N:
            raise InvariantBreach("pigeonhole bound failed")
        old = list(v_prime)
        v_prime.append(d)
        v_prime.sort()
        g.interesting += 1
        wit = find_bad_path_witness(lcl, v_prime)
        M = N // (2 * n_v)
        half = M // 2
        if half < 1:
            raise InvariantBreach(f"N dropped below 1 (N={N}); n0 too small")

        def pool(c):
            out = [z for z in zs if star(z) == c]
            if c in old:
                out += reserves[c]
            return out

        if wit.a == wit.b:
            both = pool(wit.a)
            vs, ws = both[:M], both[M:2 * M]
        else:
            vs, ws = pool(wit.a)[:M], pool(wit.b)[:M]
        if len(vs) < M or len(ws) < M:
            raise InvariantBreach("not enough endpoint candidates")

        floor = max(longest, stage) + 1
        new_paths, lengths = [], []
        for i in range(half):
            v, w = vs[i], ws[i]
            ev = min((e for e in g.f.inc[v] if g.phi[v, e] == wit.alpha), key=edge_key)
            fw = min((e for e in g.f.inc[w] if g.phi[w, e] == wit.beta), key=edge_key)
            vpath, e_i = g.walk_to_virtual(v, ev)
            wpath, f_i = g.walk_to_virtual(w, fw)
            base = len(vpath) - 1 + len(wpath) - 1
            L = wit.good.least_bad(max(base + 2, floor))
            if L is None:
                raise InvariantBreach("bad length set is finite")
            fresh = g.join(stage, v, e_i, vpath[-1], w, f_i, wpath[-1], L - base - 1)
            new_paths.append(vpath + fresh + wpath[::-1])
            lengths.append(L)
        longest = max([longest] + lengths)

        new_res = {}
        for c in v_prime:
            if c == wit.a:
                new_res[c] = vs[half:][:half]
            elif c == wit.b:
                new_res[c] = ws[half:][:half]
            elif c == d:
                new_res[c] = [z for z in zs if star(z) == d][:half]
            else:
                new_res[c] = reserves[c][:half]
            if len(new_res[c]) < half:
                raise InvariantBreach(f"not enough reserves for {c}")
        paths, reserves, N = new_paths, new_res, half
        g.record(stage, "interesting", N, names(v_prime),
                 objects={"paths": paths,
                          "reserves": {",".join(lcl.names(c)): ys for c, ys in reserves.items()}},
                 added=lcl.names(d), witness={"a": lcl.names(wit.a), "alpha": lcl.sigma[wit.alpha],
                                              "b": lcl.names(wit.b), "beta": lcl.sigma[wit.beta]},
                 lengths=sorted(set(lengths)))

    return _timeout(g, max_stages, pending)


def _timeout(g: _Game, max_stages: int, pending: list) -> AdversaryTranscript:
    if pending:
        return g.finish(Outcome("DIVERGENCE", max_stages, pending=sorted(pending)[:50]))
    return g.finish(Outcome("BUDGET_EXHAUSTED", max_stages))


# ---------------------------------------------------------------------------
# computable mode


def run_comp_adversary(lcl: Lcl, solver: OnlineSolver, max_stages: int,
                       n0_override: int | None = None) -> AdversaryTranscript:
    """Build a computable Δ-regular tree on which ``solver`` fails to be a Π-coloring."""
    if decide_greediness(lcl) is not None:
        raise LclIsGreedy("the problem is greedy; no adversary exists")
    n_s = lcl.n_labels
    delta = lcl.delta
    n0 = _resolve_n0(n0_override, default_n0_comp(lcl))
    g = _Game(lcl, solver, max_stages, n0, "comp")
    f = g.f

    centers = [f.fresh_vertex_with_virtuals(0, delta) for _ in range(n0)]
    sigma_prime: list[int] = []
    reserves: dict[int, list[HalfEdge]] = {}
    N = n0
    pending: list = []

    def objects():
        return {"centers": centers,
                "reserves": {lcl.sigma[a]: [list(h) for h in hs] for a, hs in reserves.items()}}

    g.record(0, "initial", N, [], objects=objects())

    def ball(x):
        out = [x]
        for e in f.edges_at(x):
            y = f.other(x, e)
            if y is not None:
                out.append(y)
        return out

    for m in range(max_stages):
        stage = m + 1
        balls = [ball(x) for x in centers]
        pending = [(y, e) for B in balls for y in B for e in f.edges_at(y)
                   if g.ask((y, e), m) is None]
        for i, B in enumerate(balls):
            if g.converged(B):
                bad = g.check_region(B)
                if bad is not None:
                    g.record(stage, "final", N, lcl.names(sigma_prime), len(pending))
                    return g.finish(Outcome("VIOLATION", stage,
                                            {"center": centers[i], "vertices": sorted(B),
                                             "verdict": bad}))
        if pending:
            g.record(stage, "uninteresting", N, lcl.names(sigma_prime), len(pending))
            continue

        if len(sigma_prime) == n_s:
            raise InvariantBreach("all balls Π-colored although sigma' is everything")
        outs = []
        for x in centers:
            fx = next((e for e in f.edges_at(x) if e in f.virtual and g.phi[x, e] not in sigma_prime), None)
            if fx is None:
                raise InvariantBreach("Π-colored ball has no virtual label outside sigma'")
            outs.append((x, fx))
        beta, count = _majority(g.phi[h] for h in outs)
        if count * n_s < N:
            raise InvariantBreach("pigeonhole bound failed")
        old = set(sigma_prime)
        sigma_prime = sorted(old | {beta})
        g.interesting += 1
        wit = find_bad_star_witness(lcl, sigma_prime)
        M = N // (delta * n_s)
        half = M // 2
        if half < 1:
            raise InvariantBreach(f"N dropped below 1 (N={N}); n0 too small")

        beta_pool = [h for h in outs if g.phi[h] == beta]
        pools = {a: (beta_pool if a == beta else reserves[a]) for a in set(wit.alphas)}
        used = Counter()
        picks: list[list[HalfEdge]] = []  # picks[j][i] = (z_i^j, g_i^j)
        for a in wit.alphas:
            start = used[a] * M
            col = pools[a][start:start + M]
            if len(col) < M:
                raise InvariantBreach(f"not enough half edges labeled {lcl.sigma[a]}")
            picks.append(col)
            used[a] += 1

        new_centers = []
        for i in range(half):
            v = f.new_vertex(stage)
            for j in range(wit.k):
                f.attach(v, picks[j][i][1], stage)
            for _ in range(delta - wit.k):
                f.attach(v, f.new_edge(), stage)
            new_centers.append(v)

        new_res: dict[int, list[HalfEdge]] = {}
        for a in sigma_prime:
            if a in wit.alphas:
                spare = [picks[j][i] for j, aj in enumerate(wit.alphas) if aj == a for i in range(half, M)]
                new_res[a] = spare[:half]
            elif a == beta:
                new_res[a] = beta_pool[:half]
            else:
                new_res[a] = reserves[a][:half]
            if len(new_res[a]) < half:
                raise InvariantBreach(f"not enough reserves for {lcl.sigma[a]}")
        centers, reserves, N = new_centers, new_res, half
        g.record(stage, "interesting", N, lcl.names(sigma_prime), objects=objects(),
                 added=lcl.sigma[beta], witness={"k": wit.k, "alphas": lcl.names(wit.alphas)})

    return _timeout(g, max_stages, pending)


# ---------------------------------------------------------------------------
# replay and invariants


def graph_at(transcript: AdversaryTranscript, stage: int) -> HalfEdgeGraph:
    """Rebuild the construction after ``stage`` from the transcript records alone."""
    vertices: list[int] = []
    ends: dict[str, list[int]] = {}
    for rec in transcript.stages:
        if rec.stage > stage:
            break
        vertices += rec.added_vertices
        for x, e in rec.added_incidences:
            ends.setdefault(e, []).append(x)
    return make_graph(vertices, ends.items(), transcript.lcl.delta)


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def _tracked_vertices(mode: str, objects: dict) -> list[int]:
    if mode == "hc":
        out = [P[0] for P in objects["paths"]]
        for ys in objects["reserves"].values():
            out += ys
    else:
        out = list(objects["centers"])
        for hs in objects["reserves"].values():
            out += [h[0] for h in hs]
    return out


def check_invariants(transcript: AdversaryTranscript) -> list[str]:
    """Replay the records and return every invariant failure found (empty = all hold)."""
    problems: list[str] = []
    t = transcript
    delta = t.lcl.delta
    bound = len(t.lcl.vertex_constraints) if t.mode == "hc" else t.lcl.n_labels
    divisor = 4 * bound if t.mode == "hc" else 2 * delta * bound
    uf = _UnionFind()
    degree: Counter = Counter()
    ends: dict[str, list[int]] = {}
    tracked: list[int] = []
    prev_N = None
    prev_tracked: list = []
    for rec in t.stages:
        before = set(degree)
        for x in rec.added_vertices:
            uf.add(x)
            degree[x] = 0
        for x, e in rec.added_incidences:
            degree[x] += 1
            pts = ends.setdefault(e, [])
            pts.append(x)
            if len(pts) == 2 and not uf.union(pts[0], pts[1]):
                problems.append(f"stage {rec.stage}: cycle closed by edge {e}")
        if any(d != delta for d in degree.values()):
            problems.append(f"stage {rec.stage}: vertex without exactly {delta} incidences")
        if rec.N < 1:
            problems.append(f"stage {rec.stage}: N={rec.N} < 1")
        if prev_N is not None and rec.case == "interesting" and rec.N * divisor < prev_N - divisor:
            problems.append(f"stage {rec.stage}: N shrank by more than {divisor}")
        if rec.interesting_count > bound:
            problems.append(f"stage {rec.stage}: {rec.interesting_count} interesting cases > {bound}")
        if rec.case == "interesting" and len(rec.tracked) != len(prev_tracked) + 1:
            problems.append(f"stage {rec.stage}: tracked set did not grow by one")
        if t.mode == "hc" and rec.case == "uninteresting":
            virt_old = [e for e, pts in ends.items() if len(pts) == 1 and pts[0] in before]
            if virt_old:
                problems.append(f"stage {rec.stage}: virtual edges left at older vertices")
        if rec.objects is not None:
            tracked = _tracked_vertices(t.mode, rec.objects)
        roots = [uf.find(x) for x in tracked]
        if len(set(roots)) != len(roots):
            problems.append(f"stage {rec.stage}: tracked objects share a component")
        prev_N = rec.N
        prev_tracked = rec.tracked
    rebuilt = graph_at(t, t.stages[-1].stage if t.stages else 0)
    if rebuilt != t.final_graph:
        problems.append("records do not rebuild the final graph")
    if t.outcome.kind == "VIOLATION":
        w = t.outcome.witness
        region = t.final_graph.induced(w["vertices"])
        sub = {h: t.committed[h] for h in region.half_edges()}
        if verify_coloring(region, t.lcl, sub).ok or w["verdict"].ok:
            problems.append("violation witness verifies as a valid coloring")
    return problems


def run_adversary(mode: str, lcl: Lcl, solver: OnlineSolver, max_stages: int,
                  n0_override: int | None = None) -> AdversaryTranscript:
    if mode == "hc":
        return run_hc_adversary(lcl, solver, max_stages, n0_override)
    if mode == "comp":
        return run_comp_adversary(lcl, solver, max_stages, n0_override)
    raise BadParameter(f"unknown mode {mode!r}")
