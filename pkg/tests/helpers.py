"""Independent brute-force oracles, generators and the LCL corpus shared by the tests.

Nothing here calls the deciders under test; the oracles search label
assignments on explicit graphs and re-check every hit with verify_coloring.
"""
from __future__ import annotations

import random
from itertools import combinations, combinations_with_replacement, permutations, product

from lcltrees.core import Lcl, build_path, make_graph, multiset, verify_coloring
from lcltrees.homproblems import SimpleGraph, build_h_delta, lcl_from_graph


# -- named problems ----------------------------------------------------------


def k_lcl(n: int, delta: int) -> Lcl:
    names = [str(i) for i in range(1, n + 1)]
    return lcl_from_graph(SimpleGraph.from_edges(names, combinations(names, 2)), delta)


def h2_lcl() -> Lcl:
    return lcl_from_graph(build_h_delta(2), 2)


def matching_lcl() -> Lcl:
    return Lcl.from_names(2, ["M", "U"], [["M", "U"]], [["M", "M"], ["U", "U"]])


def random_lcl(rng: random.Random, delta: int, n_labels: int) -> Lcl:
    sigma = "abc"[:n_labels]
    stars = list(combinations_with_replacement(sigma, delta))
    pairs = list(combinations_with_replacement(sigma, 2))
    vcs = rng.sample(stars, rng.randint(1, min(len(stars), 4)))
    ecs = rng.sample(pairs, rng.randint(0, len(pairs)))
    return Lcl.from_names(delta, sigma, vcs, ecs)


def corpus() -> list[tuple[str, Lcl]]:
    """Fixed corpus: the named problems plus seeded random ones (|Σ| <= 3, Δ in {2, 3})."""
    out = [("K2_d2", k_lcl(2, 2)), ("K3_d2", k_lcl(3, 2)), ("K3_d3", k_lcl(3, 3)),
           ("K2_d3", k_lcl(2, 3)), ("H2_d2", h2_lcl()), ("matching_d2", matching_lcl()),
           ("matching_d3", Lcl.from_names(3, ["M", "U"], [["M", "U", "U"]], [["M", "M"], ["U", "U"]])),
           ("sinkless_like_d3", Lcl.from_names(3, ["o", "i"], [["o", "i", "i"], ["o", "o", "i"], ["o", "o", "o"]],
                                               [["o", "i"]]))]
    rng = random.Random(20240611)
    for n in range(22):
        delta = 2 + n % 2
        out.append((f"rand{n}_d{delta}", random_lcl(rng, delta, 2 + n % 2)))
    return out


# -- path oracle -------------------------------------------------------------


def path_extends(lcl: Lcl, v_prime, a, alpha, b, beta, length: int) -> bool:
    """Search all colorings of the Δ-regular path of ``length`` edges.

    Vertex ``i`` picks a star from ``v_prime`` (``a`` / ``b`` at the ends) and an
    arrangement of it over its half edges; the search walks the path left to
    right, remembering dead (position, incoming label) states.  A found coloring
    is re-verified on the explicit graph.
    """
    graph = build_path(lcl.delta, length)
    vp = [tuple(v) for v in v_prime]
    path_edge = {i: f"e{i}" for i in range(length)}
    dead: set[tuple[int, int | None]] = set()

    def arrangements(i: int):
        stars = [a] if i == 0 else [b] if i == length else vp
        for m in stars:
            for perm in sorted(set(permutations(m))):
                if i == 0 and perm[-1] != alpha:
                    continue
                if i == length and perm[0] != beta:
                    continue
                yield m, perm

    def search(i: int, incoming: int | None, acc: list):
        if (i, incoming) in dead:
            return None
        for m, perm in arrangements(i):
            # perm[0] faces left, perm[-1] faces right (length-0 paths use both ends)
            if i > 0 and multiset((incoming, perm[0])) not in lcl.eset:
                continue
            if i == length:
                return acc + [perm]
            got = search(i + 1, perm[-1], acc + [perm])
            if got is not None:
                return got
        dead.add((i, incoming))
        return None

    if length < 1:
        raise ValueError("length >= 1")
    found = search(0, None, [])
    if found is None:
        return False
    coloring = {}
    for i, perm in enumerate(found):
        left = path_edge.get(i - 1)
        right = path_edge.get(i)
        rest = [e for e in graph.incident[i] if e not in (left, right)]
        labels = list(perm)
        if left is not None:
            coloring[i, left] = labels.pop(0)
        if right is not None:
            coloring[i, right] = labels.pop()
        for e, s in zip(rest, labels):
            coloring[i, e] = s
    assert verify_coloring(graph, lcl, coloring, vp).ok
    return True


def quadruples(v_prime):
    for a in v_prime:
        for alpha in sorted(set(a)):
            for b in v_prime:
                for beta in sorted(set(b)):
                    yield a, alpha, b, beta


def all_lengths_good(lcl: Lcl, v_prime, length: int) -> bool:
    return all(path_extends(lcl, v_prime, *q, length) for q in quadruples(v_prime))


def nonempty_subsets(items):
    items = list(items)
    for size in range(1, len(items) + 1):
        yield from combinations(items, size)


# -- star / clique oracles ---------------------------------------------------


def brute_star_ok(lcl: Lcl, sigma_prime, alphas) -> bool:
    """Leaves labeled ``alphas`` (their own half edges); center must pick a star."""
    sp = set(sigma_prime)
    k = len(alphas)
    for leaf_stars in product(lcl.vertex_constraints, repeat=k):
        if not all(alpha in m for alpha, m in zip(alphas, leaf_stars)):
            continue
        for center in lcl.vertex_constraints:
            for perm in set(permutations(center)):
                inner, virt = perm[:k], perm[k:]
                if all(s in sp for s in virt) and all(
                        multiset((al, s)) in lcl.eset for al, s in zip(alphas, inner)):
                    return True
    return False


def brute_is_greedy(lcl: Lcl, sigma_prime) -> bool:
    sp = sorted(set(sigma_prime))
    return all(brute_star_ok(lcl, sp, alphas)
               for k in range(lcl.delta + 1) for alphas in combinations_with_replacement(sp, k))


def brute_has_clique(vertices, edges, size: int) -> bool:
    es = {frozenset(e) for e in edges}
    return any(all(frozenset(p) in es for p in combinations(group, 2))
               for group in combinations(vertices, size))


def all_labeled_graphs(n: int):
    vs = [str(i) for i in range(n)]
    pairs = list(combinations(vs, 2))
    for mask in range(1 << len(pairs)):
        yield SimpleGraph.from_edges(vs, [p for j, p in enumerate(pairs) if mask >> j & 1])


# -- random graphs -----------------------------------------------------------


def random_tree_edges(rng: random.Random, n: int, max_degree: int) -> list[tuple[int, int]]:
    deg = [0] * n
    edges = []
    for v in range(1, n):
        cands = [u for u in range(v) if deg[u] < max_degree]
        u = rng.choice(cands)
        deg[u] += 1
        deg[v] += 1
        edges.append((u, v))
    return edges


def random_forest_edges(rng: random.Random, n: int, max_degree: int) -> list[tuple[int, int]]:
    """Random tree with a few edges dropped."""
    edges = random_tree_edges(rng, n, max_degree)
    return [e for e in edges if rng.random() > 0.1]


def half_edge_graph(n: int, edges, delta: int, rng: random.Random | None = None):
    """Δ-regular half-edge graph from simple edges, padding with virtual edges; ids optionally shuffled."""
    ids = list(range(n))
    if rng is not None:
        rng.shuffle(ids)
    records = []
    deg = [0] * n
    for u, v in edges:
        records.append((ids[u], ids[v]))
        deg[u] += 1
        deg[v] += 1
    for v in range(n):
        records += [(ids[v],)] * (delta - deg[v])
    return make_graph(range(n), [(f"e{i}", ends) for i, ends in enumerate(records)], delta)


def random_graph_edges(rng: random.Random, n: int, max_degree: int, tries: int) -> list[tuple[int, int]]:
    """Random simple graph of bounded degree (cycles allowed)."""
    deg = [0] * n
    edges: set[tuple[int, int]] = set()
    for _ in range(tries):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e in edges or deg[u] >= max_degree or deg[v] >= max_degree:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return sorted(edges)


def bfs_dist(n_adj: dict, src) -> dict:
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for w in n_adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist
